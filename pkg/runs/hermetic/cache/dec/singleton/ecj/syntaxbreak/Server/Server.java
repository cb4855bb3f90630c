public class Server {
    private static Server server;
    private final String name;

    private Server(String name) {
        this.name = name;
    }

    public static Server create(String name) {
        return new Server(name);
    }

    public static Server getServer() {
        return server;
    }

    public static void setServer(Server server) {
        if (Server.server != null) {
            throw new UnsupportedOperationException("Cannot redefine singleton Server");
        }
        Server.server = server;
    }

    public static void reset() {
        server = null;
    }

    public String getName() {
        return name;
    }

