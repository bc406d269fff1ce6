"""Exception types shared across the package."""


class ResourceLimitError(RuntimeError):
    """A configured resource cap (support size, retry budget, state space) was hit."""
