"""Exception types shared across the package.

Every failure mode raised by library code derives from GhelabError so
callers (and the CLI) can catch one base class. Names describe the
violated contract, not the call site.
"""


class GhelabError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParams(GhelabError):
    """Parameter set violates its documented domain."""


class TooShort(GhelabError):
    """Series too short for the requested operation."""


class NonPositivePrice(GhelabError):
    """Log returns requested on a price level that is zero or negative."""


class DegenerateSeries(GhelabError):
    """Structure-function denominator is zero (e.g. all-zero detrended path)."""


class TauTooLarge(GhelabError):
    """Lag grid does not fit the series length."""


class NonPositiveStructureFunction(GhelabError):
    """K_q(tau) vanished somewhere on the fit grid, so log K is undefined."""


class EmbeddingFailure(GhelabError):
    """Circulant embedding produced a negative eigenvalue."""


class NonStationaryAR(GhelabError):
    """Autoregressive polynomial has a root on or inside the unit circle."""


class DegenerateVariance(GhelabError):
    """Both dispersion inputs of a test statistic are zero."""


class MissingShuffledBlock(GhelabError):
    """Comparison requested on a report computed without shuffles."""


class MissingEmpiricalData(GhelabError):
    """Empirical input required for a table column was not supplied."""


class EmptySeries(GhelabError):
    """Input file contained a header but no data rows."""


class ParseError(GhelabError):
    """A cell failed to parse; carries the 1-based data row index."""

    def __init__(self, row: int, message: str = ""):
        self.row = row
        super().__init__(f"row {row}: {message}" if message else f"row {row}")


class UnknownKey(GhelabError):
    """Config file contains a key this package does not define."""


class MissingKey(GhelabError):
    """Config file lacks a key required by the requested run mode."""
