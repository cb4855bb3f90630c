public class Utils {
    public static int decodeDigit(char c) {
        int digit = Character.digit(c, 16);
        if (digit < 0) {
            throw new IllegalArgumentException("Invalid URL encoding: not a valid digit (radix 16)" + c);
        }
        return digit;
    }
}
