package corpus;

public class Ctor {

    private final String name;
    private final int weight;

    public Ctor(String name) {
        this(name, 0);
    }

    public Ctor(String name, int weight) {
        this.name = name;
        this.weight = weight;
    }

    String describe() {
        return name + ":" + weight;
    }
}
