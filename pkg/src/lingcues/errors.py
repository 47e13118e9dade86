"""Exception hierarchy.

``DataError`` subclasses describe bad input data and map to CLI exit code 2;
``ConfigError`` maps to exit code 1.
"""


class LingCuesError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(LingCuesError):
    pass


class DataError(LingCuesError):
    pass


class MissingColumn(DataError):
    def __init__(self, column, path=None):
        self.column = column
        where = f" in {path}" if path else ""
        super().__init__(f"missing required column {column!r}{where}")


class BadLabel(DataError):
    def __init__(self, value, row):
        self.value = value
        self.row = row
        super().__init__(f"row {row}: label {value!r} is not one of real/fake")


class DuplicateId(DataError):
    def __init__(self, item_id, row=None):
        self.item_id = item_id
        where = f"row {row}: " if row is not None else ""
        super().__init__(f"{where}duplicate id {item_id!r}")


class EmptyCorpus(DataError):
    pass


class EmptyText(DataError):
    def __init__(self, row):
        self.row = row
        super().__init__(f"row {row}: both title and body are empty")


class UnknownStance(DataError):
    def __init__(self, value, row=None):
        self.value = value
        where = f"row {row}: " if row is not None else ""
        super().__init__(f"{where}unknown stance {value!r}")


class DegenerateSplit(DataError):
    pass


class SingleClassCorpus(DataError):
    pass


class MissingStats(LingCuesError):
    pass


class NonFiniteFeature(DataError):
    def __init__(self, row, column):
        self.row = row
        self.column = column
        super().__init__(f"non-finite value at row {row}, column {column!r}")


class ColumnMismatch(LingCuesError):
    def __init__(self, expected, got):
        self.expected = tuple(expected)
        self.got = tuple(got)
        super().__init__(f"columns {list(self.got)} do not match model columns {list(self.expected)}")


class LengthMismatch(LingCuesError):
    pass


class EmptySubset(LingCuesError):
    pass


class NoFeatureMeetsFloor(DataError):
    pass


class SingleAlternative(LingCuesError):
    pass


class DegenerateColumn(LingCuesError):
    pass


class NoPositives(DataError):
    pass


class ModelFormatError(LingCuesError):
    pass
