"""Figure renderer for deltashell CSV datasets."""

__version__ = "0.1.0"
