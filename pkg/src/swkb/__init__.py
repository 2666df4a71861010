"""Shape-invariant potentials: trace formula, Maslov constants, SWKB exactness."""
