"""HTTP service wrapping the engine, plus the shared operation layer
the command-line client calls in-process."""
