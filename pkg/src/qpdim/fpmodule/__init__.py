"""Finitely presented modules over quotient rings, made concrete."""
from .modules import (
    FreeTensor,
    MinimalGenerators,
    ModulePresentation,
    VectorizedModule,
    annihilator_ideal,
    cyclic_module,
    default_bound,
    direct_sum,
    free_module,
    free_split,
    hom_basis,
    hom_module,
    minimal_generators,
    regular_module,
    residue_field,
    tensor,
    vectorize,
)
from .iso import ISOMORPHIC, NOT_ISOMORPHIC, UNKNOWN, IsoResult, iso_test
from .resolution import Resolution, minimal_resolution, presentation_of, syzygy, syzygy_power, transpose
from .derived import DerivedTable, ReflexivityReport, derived_table, ext_table, reflexivity_probe, tor_table
