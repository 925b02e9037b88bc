package bench;

/** Linear scan over the haystack; deliberately naive. */
public class SearchRunner {

    long search(int[] haystack, int needle) {
        long hits = 0;
        for (int i = 0; i < haystack.length; i++) {
            if (haystack[i] == needle) {
                hits++;
            }
        }
        return hits;
    }
}
