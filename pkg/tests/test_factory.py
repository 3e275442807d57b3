"""Factory circuits: logical verification, cultivation, and runtime accounting."""

from fractions import Fraction as F

import pytest

from loopfold.factory import (ccz_factory_spec, cultivation_cycles, factory_runtime,
                              output_error, verify_factory)
from loopfold.loopsim import SILICON

P = SILICON


def test_folded_circuit_structure():
    c = ccz_factory_spec("folded")
    assert c.logical_qubits == 8
    assert c.count("CNOT") == 13
    assert c.count("MZ") == 4
    assert c.count("S") == 4
    assert c.num_slices == 7
    # the slice coupling the check qubits has exactly four abstractly
    # parallel CNOTs targeting q4..q7
    slice4 = c.time_slices[3]
    assert [op.qubits for op in slice4] == [(0, 4), (1, 5), (2, 6), (3, 7)]


def test_rotated_circuit_structure():
    c = ccz_factory_spec("rotated")
    assert c.logical_qubits == 12
    assert c.count("CNOT") == 17
    assert c.count("MZ") == 4
    assert c.count("MY") == 4
    assert c.num_slices == 8


def test_folded_verification_all_16_branches():
    ver = verify_factory(ccz_factory_spec("folded"))
    assert ver.passed
    assert len(ver.branches) == 16
    assert ver.min_fidelity > 1 - 1e-9


def test_rotated_verification_all_256_branches():
    ver = verify_factory(ccz_factory_spec("rotated"))
    assert ver.passed
    assert len(ver.branches) == 256
    assert ver.min_fidelity > 1 - 1e-9


def test_wrong_resource_states_cannot_distill():
    ver = verify_factory(ccz_factory_spec("folded"), inputs="0")
    assert not ver.passed
    assert ver.failing is not None
    assert ver.min_fidelity < 0.5


def test_cultivation_cycles():
    assert cultivation_cycles(1e-7, 25, 8, 8) == 22
    assert cultivation_cycles(1e-7, 25, 8, 12) == 15
    # 8 * 3e4 / (16 * 2 * 676) = 11.09 rounds to 11 under the frozen
    # nearest-cycle rule that reproduces both published counts
    assert cultivation_cycles(1e-7, 25, 8, 16) == 11


def test_cultivation_rejects_other_targets():
    with pytest.raises(ValueError):
        cultivation_cycles(1e-6, 25, 8, 8)
    with pytest.raises(ValueError):
        cultivation_cycles(1e-7, 24, 8, 8)


def test_folded_runtime_216us():
    rep = factory_runtime("folded", P, 25)
    assert abs(rep.runtime_ns - 216000) <= 1000
    assert rep.runtime_ns == F(1724500, 8)  # 215562.5 ns exactly
    assert rep.space == F(1, 2)
    assert rep.cultivation_cycles == 22
    assert rep.spacetime_ns == rep.runtime_ns * rep.space


def test_rotated_runtime_279us():
    rep = factory_runtime("rotated", P, 25)
    assert abs(rep.runtime_ns - 279000) <= 1000
    assert rep.space == 1
    assert rep.cultivation_cycles == 15


def test_spacetime_ratio():
    folded = factory_runtime("folded", P, 25)
    rotated = factory_runtime("rotated", P, 25)
    ratio = rotated.spacetime_ns / folded.spacetime_ns
    assert abs(float(ratio) - 2.6) <= 0.05


def test_output_error_exact():
    assert output_error() == F(28, 10**14)
    assert float(output_error()) == 2.8e-13
    rep = factory_runtime("folded", P, 25)
    assert rep.output_error == F(28, 10**14)


def test_runtime_matches_table_expression_within_1us():
    from loopfold.costs import factory_cell_us
    for variant in ("folded", "rotated"):
        exact_us = factory_runtime(variant, P, 25).runtime_ns / 1000
        cell_us = factory_cell_us(variant, P, 25)
        assert abs(exact_us - cell_us) <= 1


def test_port_serialization_in_timeline():
    """CNOTs and S gates sharing the loop's single port never overlap."""
    for variant in ("folded", "rotated"):
        sched = factory_runtime(variant, P, 25).timeline
        port_ops = sorted((e for e in sched.events
                           if e.action.startswith(("cnots", "s_gates", "y_basis"))),
                          key=lambda e: e.start)
        for a, b in zip(port_ops, port_ops[1:]):
            assert b.start >= a.end


def test_unknown_variant_rejected():
    with pytest.raises(ValueError):
        ccz_factory_spec("square")
    with pytest.raises(ValueError):
        factory_runtime("square", P, 25)
