from __future__ import annotations

import random

import pytest

from profsum.model import Frame, MetricDescriptor, Profile, Sample, canonicalize, fnv1a64

CPU = MetricDescriptor("cpu", "nanoseconds")
ALLOC = MetricDescriptor("alloc", "bytes")


def test_fnv1a64_known_vectors():
    # published FNV-1a test vectors
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a64(b"foobar") == 0x85944171F73967E8


def test_frame_identity_is_the_full_triple():
    a = Frame("f", "A.java", 10)
    assert a == Frame("f", "A.java", 10)
    assert a != Frame("f", "A.java", 11)
    assert a != Frame("f", "B.java", 10)
    assert a != Frame("g", "A.java", 10)
    assert hash(a) == hash(Frame("f", "A.java", 10))


def test_frame_normalizes_unknown_markers():
    assert Frame("f", "", 0) == Frame("f", None, None)
    assert Frame("f", "A.java", 0).line is None


def test_frame_rejects_bad_fields():
    with pytest.raises(ValueError):
        Frame("")
    with pytest.raises(ValueError):
        Frame("f", None, -1)


def test_sample_validation():
    f = Frame("f")
    with pytest.raises(ValueError):
        Sample((), (1,))
    with pytest.raises(ValueError):
        Sample((f,), (0,))
    with pytest.raises(ValueError):
        Sample((f,), (-1, 2))
    s = Sample([f], [0, 3])
    assert s.values == (0, 3)


def test_profile_validation():
    f = Frame("f")
    with pytest.raises(ValueError):
        Profile((), (), 0)
    with pytest.raises(ValueError):
        Profile((CPU, CPU), (), 0)
    with pytest.raises(ValueError):
        Profile((CPU,), (), 1)
    with pytest.raises(ValueError):
        Profile((CPU,), (Sample((f,), (1, 2)),), 0)


def test_canonicalize_merges_identical_stacks():
    main, foo = Frame("main"), Frame("foo")
    p = Profile(
        (CPU,),
        (Sample((main, foo), (3,)), Sample((main, foo), (2,))),
    )
    c = canonicalize(p)
    assert len(c.samples) == 1
    assert c.samples[0].values == (5,)
    assert c.samples[0].stack == (main, foo)


def test_canonicalize_idempotent_and_preserves_totals():
    rng = random.Random(7)
    frames = [Frame(f"fn{i}", None, rng.choice([None, 5, 9])) for i in range(5)]
    samples = []
    for _ in range(50):
        depth = rng.randrange(1, 5)
        stack = tuple(rng.choice(frames) for _ in range(depth))
        samples.append(Sample(stack, (rng.randrange(1, 50), rng.randrange(0, 50))))
    p = Profile((CPU, ALLOC), tuple(samples))
    c1 = canonicalize(p)
    c2 = canonicalize(c1)
    assert c1 == c2
    assert c1.totals() == p.totals()
    # sorted lexicographically by stack
    keys = [tuple(f.sort_key() for f in s.stack) for s in c1.samples]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)


def test_metric_index():
    p = Profile((CPU, ALLOC), (Sample((Frame("f"),), (1, 0)),), 1)
    assert p.metric_index("alloc") == 1
    with pytest.raises(KeyError):
        p.metric_index("nope")
