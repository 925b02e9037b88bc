package corpus;

public class BracesInStrings {

    String wrap(String s) {
        String open = "{";
        String close = "}";
        return open + s + close;
    }

    String tricky() {
        String s = "}";
        String t = "{{{";
        String u = "\"}";
        return s + t + u;
    }

    int countBraces(String text) {
        int n = 0;
        for (char c : text.toCharArray()) {
            if (c == '{' || c == '}') {
                n++;
            }
        }
        return n;
    }
}
