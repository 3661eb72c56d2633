"""Exception and warning types shared across the package."""

from __future__ import annotations


class PictoError(Exception):
    """Base class for all pictochart errors."""


class UnknownNode(PictoError):
    def __init__(self, node_id: str):
        super().__init__(f"no node with id {node_id!r}")
        self.node_id = node_id


class InvalidAction(PictoError):
    """Action parameters do not fit the targeted node kind."""


class NothingToUndo(PictoError):
    pass


class NothingToRedo(PictoError):
    pass


class UnrecognizedChart(PictoError):
    """No chart-type inference rule fired on the input."""


class MalformedDocument(PictoError):
    """Vector document could not be parsed."""


class CanvasMismatch(PictoError):
    """Two trees compared on different canvas sizes."""


class CanvasTooSmall(PictoError):
    """Requested layout does not fit the canvas."""


class NotRectLike(InvalidAction):
    """Pattern requires a rectangular mark."""


class ZeroTotal(InvalidAction):
    """Area pattern needs a nonzero reference total."""


class UntranslatableIntent(PictoError):
    """Intent produced no valid plan (no lexicon hit, remote refused or invalid)."""


class ProviderUnavailable(PictoError):
    """Remote provider could not be reached."""


class InvalidAssetReturned(PictoError):
    """Provider returned an image violating the asset contract."""


class PictoWarning(UserWarning):
    """Base class for non-fatal conditions attached to results."""


class NoLegend(PictoWarning):
    pass


class AnchorOutOfCanvas(PictoWarning):
    pass


class CannotPack(PictoWarning):
    pass


class DistortionWarning(PictoWarning):
    pass
