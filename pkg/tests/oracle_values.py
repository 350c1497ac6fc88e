"""Reference values produced by tools/derive_oracles.py (sympy + mpmath, independent of lvl2net)."""

TREE_CHILD_TAU = "0.12262854445268189255711371026692233"
TREE_CHILD_RHO = "0.078757348852415823779558774328595645"
TREE_CHILD_GAMMA = "4.6710490707453249954709629420947175"
TREE_CHILD_C = "0.066741846376998036220305091388162953"
TREE_CHILD_R = "0.19919851075421429916558795138549485"
CATALAN_GAMMA = "1.4715177646857692863820950806458435"

# n! [x^n] T for n = 1..14, by Lagrange inversion in sympy polynomial arithmetic
INDEPENDENT_COUNTS = [
    1, 3, 66, 2235, 99990, 5732775, 401710050, 33232819095, 3170107574550,
    342583091431875, 41366147420401650, 5519567135754839475, 806511639064420639350,
    128079802639343148969375,
]
