package corpus;

import java.util.List;
import java.util.function.Function;
import java.util.stream.Collectors;

public class Lambdas {

    List<Integer> lengths(List<String> words) {
        return words.stream()
            .map(w -> {
                int n = w.length();
                return n * n;
            })
            .collect(Collectors.toList());
    }

    Function<Integer, Integer> adder(int base) {
        return x -> {
            return base + x;
        };
    }
}
