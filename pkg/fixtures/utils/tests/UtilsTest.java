import org.junit.Assert;
import org.junit.Test;

public class UtilsTest {
    @Test
    public void testDecodeDigit() {
        Assert.assertEquals(10, Utils.decodeDigit('a'));
        Assert.assertEquals(0, Utils.decodeDigit('0'));
        Assert.assertEquals(15, Utils.decodeDigit('F'));
    }

    @Test
    public void testBadDigitMessage() {
        try {
            Utils.decodeDigit('z');
            Assert.fail("expected IllegalArgumentException");
        } catch (IllegalArgumentException e) {
            Assert.assertEquals("Invalid URL encoding: not a valid digit (radix 16): z",
                    e.getMessage());
        }
    }
}
