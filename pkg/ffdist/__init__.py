"""
ffdist - distance graphs over finite fields.

Exact arithmetic in F_q, character sums, spheres and their Fourier
transforms, Cayley-graph diameters and configuration counts, each paired
with a brute-force oracle so closed forms can be checked at finite q.
"""

__version__ = "0.3.0"
