from .loader import load_entry, available, validate

__all__ = ["load_entry", "available", "validate"]
