"""Configuration, errors, worker pool and the fit pipeline."""
