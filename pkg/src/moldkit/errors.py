"""Error taxonomy shared across the toolkit.

Every error carries a stable ``kind`` string; the HTTP layer forwards it
verbatim as ``{"error_kind": ..., "message": ...}``.
"""


class MoldkitError(Exception):
    kind = "error"

    @property
    def message(self) -> str:
        return str(self)


class HandleNotFoundError(MoldkitError):
    kind = "handle-not-found"


class SessionNotFoundError(MoldkitError):
    kind = "session-not-found"


class UnknownViewError(MoldkitError):
    kind = "unknown-view"


class UnknownActionError(MoldkitError):
    kind = "unknown-action"


class UnknownSearchError(MoldkitError):
    kind = "unknown-search"


class ForwardCycleError(MoldkitError):
    kind = "forward-cycle"


class ForwardDepthError(MoldkitError):
    kind = "forward-depth"


class DeclarationError(MoldkitError):
    kind = "declaration-error"


class InvalidRequestError(MoldkitError):
    kind = "invalid-request"


class ActionError(MoldkitError):
    """An action body raised; the original failure text is the message."""

    kind = "action-error"


class SearchError(MoldkitError):
    kind = "search-error"


class WrapError(MoldkitError):
    kind = "wrap-error"


class CollectionError(MoldkitError):
    """Example collection failed: duplicate id, unknown dependency, or cycle."""

    kind = "collection-error"


class MaterializationError(MoldkitError):
    """Materializing an example failed upstream; carries the run report."""

    kind = "materialization-error"

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class PageNotFoundError(MoldkitError):
    kind = "page-not-found"


class PageParseError(MoldkitError):
    kind = "page-parse"


class UnknownRootError(MoldkitError):
    kind = "unknown-root"
