import org.junit.Assert;
import org.junit.Test;

// Deliberately failing test: this fixture exists to prove the corpus
// verification gate rejects fixtures whose tests fail on the original
// classes.
public class BrokenTest {
    @Test
    public void testTripleWrongExpectation() {
        Assert.assertEquals(10, Broken.triple(3));
    }
}
