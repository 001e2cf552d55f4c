"""Services layer: run artifacts and fixture generation."""
