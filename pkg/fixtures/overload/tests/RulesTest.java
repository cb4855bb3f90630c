import org.junit.Assert;
import org.junit.Test;

public class RulesTest {
    @Test
    public void testApplyComparable() {
        Rules rules = new Rules();
        StringBuilder buf = rules.applyRules("abc", new StringBuilder());
        Assert.assertEquals("comparable:object:abc", buf.toString());
    }

    @Test
    public void testApplyObject() {
        Rules rules = new Rules();
        StringBuilder buf = rules.applyRules((Object) Integer.valueOf(7), new StringBuilder());
        Assert.assertEquals("object:7", buf.toString());
    }
}
