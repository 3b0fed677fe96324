from finitree.boolfun.bdd import BddManager, BoolFn
from finitree.boolfun.truth_table import TruthTable
