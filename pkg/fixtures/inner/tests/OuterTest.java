import org.junit.Assert;
import org.junit.Test;

// Intentionally absent from testmap.json: this unit exercises the
// recompilable-but-untested path. The test still documents the behavior
// for JDK-backed verification.
public class OuterTest {
    @Test
    public void testShifted() {
        Outer outer = new Outer(100);
        Outer.Counter counter = new Outer.Counter();
        Assert.assertEquals(101, outer.shifted(counter));
        Assert.assertEquals(102, outer.shifted(counter));
    }
}
