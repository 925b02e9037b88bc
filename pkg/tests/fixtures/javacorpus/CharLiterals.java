package corpus;

public class CharLiterals {

    boolean isOpen(char c) {
        return c == '{';
    }

    boolean isClose(char c) {
        return c == '}';
    }

    char escape() {
        char backslash = '\\';
        char quote = '\'';
        char brace = '{';
        return backslash == quote ? brace : '}';
    }
}
