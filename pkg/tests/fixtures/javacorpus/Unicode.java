package corpus;

public class Unicode {

    String greeting(String name) {
        String prefix = "你好, ";
        return prefix + name + " — ok";
    }

    int widthOf(String s) {
        int w = 0;
        for (int i = 0; i < s.length(); i++) {
            w += s.charAt(i) > 0x2e80 ? 2 : 1;
        }
        return w;
    }
}
