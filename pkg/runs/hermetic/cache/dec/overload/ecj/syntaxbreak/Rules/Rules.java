public class Rules {
    public StringBuilder applyRules(Object value, StringBuilder buf) {
        buf.append("object:").append(value);
        return buf;
    }

    public StringBuilder applyRules(Comparable<String> value, StringBuilder buf) {
        buf.append("comparable:");
        return this.applyRules((Object) value, buf);
    }

