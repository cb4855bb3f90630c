public class Broken {
    public static int triple(int x) {
        return x * 3;
    }
}
