package fft;

/**
 * Radix-2 FFT kernel, trimmed to the shape the sampled profiles see.
 * The loop nest in transform_internal strides across the data array and
 * is where the interesting cache behaviour lives.
 */
public class FFT {

    static final double JDKS = 2.0 * Math.PI;

    public static void main(String[] args) {
        run(1 << 20);
    }

    /** Runs the benchmark once at the given size. */
    static void run(int size) {
        double[] data = makeData(size);
        measureFFT(data);
    }

    static double[] makeData(int size) {
        double[] data = new double[2 * size];
        for (int i = 0; i < data.length; i++) {
            data[i] = i * 0.5 - 1.0;
        }
        return data;
    }

    /** Calculate fft and validate the result. */
    static void measureFFT(double[] data) {
        double[] copy = new double[data.length];
        System.arraycopy(data, 0, copy, 0, data.length);
        transform(copy);
        inverse(copy);
        test(data, copy);
    }

    /** Performs the accuracy check on the data. */
    static void test(double[] expected, double[] actual) {
        double diff = 0.0;
        for (int i = 0; i < expected.length; i++) {
            double d = expected[i] - actual[i];
            diff += d * d;
        }
        if (Math.sqrt(diff / expected.length) > 1e-10) {
            throw new IllegalStateException("FFT roundtrip drifted");
        }
    }

    /** Compute the fast fourier transform. */
    static void transform(double[] data) {
        transform_internal(data, -1);
    }

    /** Compute the inverse transform and rescale. */
    static void inverse(double[] data) {
        transform_internal(data, +1);
        int nd = data.length;
        int n = nd / 2;
        double norm = 1.0 / n;
        for (int i = 0; i < nd; i++) {
            data[i] *= norm;
        }
    }

    static int log2(int n) {
        int log = 0;
        for (int k = 1; k < n; k *= 2, log++) {
            // nothing; counting doublings
        }
        if (n != (1 << log)) {
            throw new IllegalArgumentException("FFT: data length is not a power of 2: " + n);
        }
        return log;
    }

    /**
     * This is the actual FFT algorithm.
     *
     * The bit-reversal pass reshuffles the array, then the three nested
     * loops combine butterflies of doubling span.  The interleaved real
     * and imaginary slots mean every butterfly touches four doubles, and
     * the outer stride grows with each dual step, which is what makes the
     * access pattern interesting to a cache profiler: late passes hop
     * across most of the array between consecutive writes.
     *
     * Direction is -1 for the forward transform and +1 for the inverse;
     * the caller owns any normalization.
     */
    static void transform_internal(double[] data, int direction) {
        if (direction != -1 && direction != 1) {
            throw new IllegalArgumentException("direction must be -1 or +1");
        }
        if (data.length == 0) {
            return;
        }
        if (data.length % 2 != 0) {
            throw new IllegalArgumentException("interleaved array must have even length");
        }
        int n = data.length / 2;
        if (n == 1) {
            return;
        }
        int logn = log2(n);
        // reshuffle first so every pass reads sequential pairs
        bitreverse(data);
        for (int bit = 0, dual = 1; bit < logn; bit++, dual *= 2) {
            double w_real = 1.0;
            double w_imag = 0.0;
            double theta = 2.0 * direction * Math.PI / (2.0 * dual);
            double s = Math.sin(theta);
            double t = Math.sin(theta / 2.0);
            double s2 = 2.0 * t * t;
            for (int a = 0; a < n; a += 2 * dual) {
                int i = 2 * a;
                int j = 2 * (a + dual);
                double wd_real = data[j];
                double wd_imag = data[j + 1];
                data[j] = data[i] - wd_real;
                data[j + 1] = data[i + 1] - wd_imag;
                data[i] += wd_real;
                data[i + 1] += wd_imag;
            }
            for (int b = 1; b < dual; b++) {
                double tmp_real = w_real - s * w_imag - s2 * w_real;
                double tmp_imag = w_imag + s * w_real - s2 * w_imag;
                w_real = tmp_real;
                w_imag = tmp_imag;
                for (int a = 0; a < n; a += 2 * dual) {
                    int i = 2 * (a + b);
                    int j = 2 * (a + b + dual);
                    double z1_real = data[j];
                    double z1_imag = data[j + 1];
                    double wd_real = w_real * z1_real - w_imag * z1_imag;
                    double wd_imag = w_real * z1_imag + w_imag * z1_real;
                    data[j] = data[i] - wd_real;
                    data[j + 1] = data[i + 1] - wd_imag;
                    data[i] += wd_real;
                    data[i + 1] += wd_imag;
                }
            }
        }
    }

    /** Bit-reverse the complex array in place. */
    static void bitreverse(double[] data) {
        int n = data.length / 2;
        for (int i = 0, j = 0; i < n - 1; i++) {
            int ii = 2 * i;
            int jj = 2 * j;
            int k = n / 2;
            if (i < j) {
                double tmp_real = data[ii];
                double tmp_imag = data[ii + 1];
                data[ii] = data[jj];
                data[ii + 1] = data[jj + 1];
                data[jj] = tmp_real;
                data[jj + 1] = tmp_imag;
            }
            while (k <= j) {
                j -= k;
                k /= 2;
            }
            j += k;
        }
    }
}
