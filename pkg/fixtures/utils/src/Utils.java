public class Utils {
    private static final String PREFIX = "Invalid URL encoding: ";

    public static int decodeDigit(char c) {
        int digit = Character.digit(c, 16);
        if (digit < 0) {
            throw new IllegalArgumentException(PREFIX + "not a valid digit (radix 16): " + c);
        }
        return digit;
    }
}
