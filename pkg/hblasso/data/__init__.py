"""Data handling for hblasso."""
from hblasso.data.loaders import (
    BaseLoader,
    CSVLoader,
    back_transform,
    get_loader,
    load_csv,
    register_loader,
    save_csv,
    standardize,
)

__all__ = ["BaseLoader", "CSVLoader", "get_loader", "register_loader",
           "load_csv", "save_csv", "standardize", "back_transform"]
