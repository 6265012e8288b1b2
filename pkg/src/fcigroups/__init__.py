"""Exact verification of centralizer finiteness conditions in cyclic extensions of Dedekind groups."""
