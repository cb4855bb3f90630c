class ParseError(Exception):
    """Source text cannot be parsed; the file cannot be scored."""

    def __init__(self, message, line, column):
        self.line = line
        self.column = column
        super().__init__(f"{message} at line {line}, column {column}")
