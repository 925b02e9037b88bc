package corpus;

public class TernaryGenerics {

    int clamp(int v, int lo, int hi) {
        return v < lo ? lo : v > hi ? hi : v;
    }

    boolean lessThan(int a, int b) {
        return a < b;
    }

    int shifted(int x, int n) {
        return n > 0 ? x << n : x >> -n;
    }
}
