"""Command groups of the rlab command line. Each module exposes ``setup(client)``."""
