"""e-positivity workbench: exact chromatic symmetric functions on small graphs,
invariant featurization, precision-first neural training, saliency attribution,
and zero-false-positive conjecture mining."""

__version__ = "0.1.0"
