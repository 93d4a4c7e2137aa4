"""Small cancellation toolkit: words, labelled graphs, pieces and conditions."""

__version__ = "0.1.0"
