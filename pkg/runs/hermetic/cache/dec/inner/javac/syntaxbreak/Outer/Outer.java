public class Outer {
    private final int base;

    public Outer(int base) {
        this.base = base;
    }

    public static class Counter {
        private int count;

        public int next() {
            count = count + 1;
            return count;
        }
    }

    public int shifted(Counter counter) {
        return base + counter.next();
    }

