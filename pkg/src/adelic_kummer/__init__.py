"""Exact Kummer theory of the geometric adele ring of a curve.

Modules:
    coeff_field    finite-field tower with mu_p, zeta, and p-th roots
    laurent        truncated Laurent series, Hensel roots of units
    adeles         finite-support ideles/adeles, valuation vectors, ramification
    local_algebra  structure of K_x[T]/(T^n - t_x), local isomorphisms, pairings
    global_galois  global automorphisms, Galois checks, primitive elements
    harrison       classification, conjugacy, and isomorphism deciders
    p1_ingest      rational functions on the projective line, superelliptic covers
    cli            JSON command-line front end
"""

__version__ = "0.1.0"
