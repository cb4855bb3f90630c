import org.junit.After;
import org.junit.Assert;
import org.junit.Test;

public class ServerTest {
    @After
    public void tearDown() {
        Server.reset();
    }

    @Test
    public void testSetOnce() {
        Server s = Server.create("main");
        Server.setServer(s);
        Assert.assertSame(s, Server.getServer());
        Assert.assertEquals("main", Server.getServer().getName());
    }

    @Test
    public void testRedefineRejected() {
        Server.setServer(Server.create("first"));
        try {
            Server.setServer(Server.create("second"));
            Assert.fail("expected UnsupportedOperationException");
        } catch (UnsupportedOperationException e) {
            Assert.assertEquals("Cannot redefine singleton Server", e.getMessage());
        }
        Assert.assertEquals("first", Server.getServer().getName());
    }
}
