package corpus;

public class StringsHeavy {

    String jsonish(String key, String value) {
        return "{\"" + key + "\": \"" + value + "\"}";
    }

    String regexish() {
        String cls = "[a-z{}]+";
        String esc = "\\{\\}";
        return cls + "|" + esc;
    }

    String slashes() {
        String url = "http://example.test/{id}";
        String comment = "// not a comment";
        String block = "/* also not a comment */";
        return url + comment + block;
    }
}
