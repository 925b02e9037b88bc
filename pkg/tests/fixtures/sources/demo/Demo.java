package demo;

/** Tiny call-chain fixture: main calls moo calls foo calls print. */
public class Demo {

    /** Prints one labelled value on both output streams. */
    static void print(String label, int value) {
        String text = label + "=" + value;
        // samples land on the two println lines below
        System.out.println(text);
        System.err.println(text.length());
    }

    static void foo(int rounds) {
        for (int i = 0; i < rounds; i++) {
            print("even", i * 2); print("odd", i * 2 + 1);
        }
    }

    static void moo(int rounds) {
        foo(rounds);
    }

    public static void main(String[] args) {
        moo(Integer.parseInt(args[0]));
    }
}
