import flaky
import hypothesis
import hypothesis.strategies as st
import io
import json
import numpy
import os
import pandas
import pytest
import cswap
import cswap.circuit
import cswap.cli
import cswap.engine
import cswap.estimate
import cswap.figures
import cswap.oracles
import cswap.states
import cswap.utils
import cswap.verify
from cswap.engine import CNOT, FREDKIN, H, TOFFOLI, StateVector
from cswap.utils import SignatureClass


SQRT_HALF = numpy.sqrt(0.5)


def bell(variant):
    return cswap.states.build(cswap.states.StateSpec.parse('bell:' + variant))


def random_state(m, seed):
    return cswap.verify.random_state(m, numpy.random.default_rng(seed))


def control_dist(a, b=None):
    return cswap.circuit.run_entanglement_test(a, b).control_dist


def amplitude_lists(m):
    # 2^m complex amplitudes as (re, im) pairs, normalized by the caller
    return st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1)),
                    min_size=2**m, max_size=2**m)


def state_from_pairs(pairs):
    a = numpy.array([complex(re, im) for re, im in pairs])
    norm = numpy.linalg.norm(a)
    hypothesis.assume(norm > 0.1)
    return StateVector(a / norm)


def test_new_basis_state():
    assert numpy.allclose(cswap.engine.new_basis_state(1, 0).amplitudes,
                          [1, 0])
    assert numpy.allclose(cswap.engine.new_basis_state(2, 3).amplitudes,
                          [0, 0, 0, 1])
    state = cswap.engine.new_basis_state(3, 5)
    assert state.amplitudes[5] == 1
    assert cswap.engine.marginal_distribution(state, [0, 1, 2]) \
        ['101'] == 1.0
    with pytest.raises(cswap.utils.DomainError):
        cswap.engine.new_basis_state(2, 4)


def test_state_vector_validation():
    with pytest.raises(cswap.utils.DomainError):
        StateVector([1, 0, 0])
    a = numpy.array([1, 0], dtype=numpy.complex128)
    assert StateVector(a, copy=False).amplitudes is a
    assert StateVector(a).amplitudes is not a


def test_hadamard():
    state = cswap.engine.apply_gate(cswap.engine.new_basis_state(1, 0), H(0))
    assert numpy.allclose(state.amplitudes, [SQRT_HALF, SQRT_HALF])
    psi = random_state(4, 0)
    phi = psi.copy()
    for _ in range(2):
        cswap.engine.apply_gate(phi, H(2))
    assert numpy.max(numpy.abs(phi.amplitudes - psi.amplitudes)) < 1e-12


def test_cnot():
    state = cswap.engine.new_basis_state(2, 1)
    cswap.engine.apply_gate(state, CNOT(0, 1))
    assert state.amplitudes[3] == 1


def test_gate_validation():
    state = cswap.engine.new_basis_state(3, 0)
    with pytest.raises(cswap.utils.DomainError):
        cswap.engine.apply_gate(state, CNOT(0, 3))
    with pytest.raises(cswap.utils.DomainError):
        FREDKIN(1, 1, 2)
    with pytest.raises(cswap.utils.DomainError):
        cswap.engine.GateOp('CZ', (0,), (1,))


def test_fredkin_swaps_targets():
    # control qubit 2 set, qubit 0 set, qubit 1 clear
    state = cswap.engine.new_basis_state(3, 5)
    cswap.engine.apply_fredkin(state, 2, 0, 1)
    assert state.amplitudes[6] == 1
    # control clear leaves the targets alone
    state = cswap.engine.new_basis_state(3, 1)
    cswap.engine.apply_fredkin(state, 2, 0, 1)
    assert state.amplitudes[1] == 1


def test_fredkin_decomposition(trials=1000):
    rng = numpy.random.default_rng(1)
    for _ in range(trials):
        psi = cswap.verify.random_state(3, rng)
        native = cswap.engine.apply_gate(psi.copy(), FREDKIN(2, 0, 1))
        decomposed = cswap.engine.apply_circuit(
            psi.copy(), cswap.circuit.fredkin_decomposition(2, 0, 1))
        assert numpy.max(numpy.abs(native.amplitudes -
                                   decomposed.amplitudes)) < 1e-12


@hypothesis.settings(deadline=None, max_examples=50)
@hypothesis.given(amplitude_lists(3), st.permutations([0, 1, 2]))
def test_gates_are_norm_preserving_involutions(pairs, qubits):
    psi = state_from_pairs(pairs)
    a, b, c = qubits
    for gate in [H(a), CNOT(a, b), TOFFOLI(a, b, c), FREDKIN(a, b, c)]:
        phi = cswap.engine.apply_gate(psi.copy(), gate)
        assert abs(phi.norm() - 1) < 1e-12
        cswap.engine.apply_gate(phi, gate)
        assert numpy.max(numpy.abs(phi.amplitudes - psi.amplitudes)) < 1e-12


def test_tensor():
    zero = cswap.engine.new_basis_state(1, 0)
    assert numpy.allclose(cswap.engine.tensor(zero, zero).amplitudes,
                          [1, 0, 0, 0])
    state = cswap.engine.tensor(bell('phi+'), zero)
    expected = numpy.zeros(8)
    expected[0] = expected[3] = SQRT_HALF
    assert numpy.allclose(state.amplitudes, expected)
    # the second factor sits on the high qubits
    one = cswap.engine.new_basis_state(1, 1)
    assert cswap.engine.tensor(zero, one).amplitudes[2] == 1


def test_tensor_capacity(monkeypatch):
    monkeypatch.setenv('CSWAP_MAX_QUBITS', '4')
    a = cswap.engine.new_basis_state(3, 0)
    with pytest.raises(cswap.utils.CapacityError):
        cswap.engine.tensor(a, a)


def test_marginal_distribution():
    state = cswap.engine.new_basis_state(2, 3)
    assert cswap.engine.marginal_distribution(state, [0, 1]) == \
        {'00': 0.0, '10': 0.0, '01': 0.0, '11': 1.0}
    marginal = cswap.engine.marginal_distribution(bell('phi+'), [0])
    assert abs(marginal['0'] - 0.5) < 1e-12
    assert abs(marginal['1'] - 0.5) < 1e-12
    # order follows the requested qubits
    state = cswap.engine.new_basis_state(3, 1)
    assert cswap.engine.marginal_distribution(state, [2, 0])['01'] == 1.0
    with pytest.raises(cswap.utils.DomainError):
        cswap.engine.marginal_distribution(state, [0, 0])


def test_inner_product():
    a = bell('phi+')
    assert abs(cswap.engine.inner_product(a, a) - 1) < 1e-12
    assert abs(cswap.engine.inner_product(a, bell('phi-'))) < 1e-12
    with pytest.raises(cswap.utils.DomainError):
        cswap.engine.inner_product(a, cswap.engine.new_basis_state(1, 0))


def test_max_qubits(monkeypatch):
    monkeypatch.delenv('CSWAP_MAX_QUBITS', raising=False)
    assert cswap.utils.get_max_qubits() == 24
    monkeypatch.setenv('CSWAP_MAX_QUBITS', 'lots')
    with pytest.raises(cswap.utils.DomainError):
        cswap.utils.get_max_qubits()
    monkeypatch.setenv('CSWAP_MAX_QUBITS', '0')
    with pytest.raises(cswap.utils.DomainError):
        cswap.utils.get_max_qubits()
    monkeypatch.setenv('CSWAP_MAX_QUBITS', '27')
    with pytest.warns(UserWarning, match='^Warning!'):
        assert cswap.utils.get_max_qubits() == 27


def test_bitstrings():
    assert cswap.utils.label_to_bits(1, 3) == '100'
    assert cswap.utils.bits_to_label('001') == 4
    assert cswap.utils.all_bitstrings(2) == ['00', '10', '01', '11']
    with pytest.raises(cswap.utils.DomainError):
        cswap.utils.bits_to_label('012')


def test_signature_classes():
    assert SignatureClass.count(SignatureClass.EVEN_ONES, 4) == 7
    assert SignatureClass.count(SignatureClass.ODD_ONES, 4) == 8
    assert SignatureClass.count(SignatureClass.EXACTLY_TWO_ONES, 5) == 10
    assert not SignatureClass.matches(SignatureClass.EVEN_ONES, 0)


def test_build_entanglement_test():
    gates, layout = cswap.circuit.build_entanglement_test(1)
    assert gates == [H(2), FREDKIN(2, 0, 1), H(2)]
    gates, layout = cswap.circuit.build_entanglement_test(2)
    assert gates == [H(4), H(5), FREDKIN(4, 0, 2), FREDKIN(5, 1, 3),
                     H(4), H(5)]
    assert layout.a_qubits == [0, 1]
    assert layout.b_qubits == [2, 3]
    assert layout.c_qubits == [4, 5]
    gates, _ = cswap.circuit.build_entanglement_test(2, trailing_cnots=True)
    assert gates[-2:] == [CNOT(2, 0), CNOT(3, 1)]
    with pytest.raises(cswap.utils.CapacityError):
        cswap.circuit.build_entanglement_test(9)
    with pytest.raises(cswap.utils.CapacityError):
        cswap.circuit.build_entanglement_test(0)


def test_run_entanglement_test_examples():
    dist = control_dist(cswap.engine.new_basis_state(2, 0))
    assert abs(dist.p_zero - 1) < 1e-12
    assert dist.support() == ['00']
    dist = control_dist(bell('psi+'))
    assert abs(dist.probability('00') - 0.75) < 1e-10
    assert abs(dist.probability('11') - 0.25) < 1e-10
    assert dist.probability('01') == dist.probability('10') == 0
    dist = control_dist(cswap.states.build_unbalanced_ghz(3, 0.))
    assert abs(dist.p_zero - 5./8) < 1e-10
    for bits in ['110', '101', '011']:
        assert abs(dist.probability(bits) - 1./8) < 1e-10
    for bits in ['100', '010', '001', '111']:
        assert dist.probability(bits) == 0


def test_run_entanglement_test_errors():
    with pytest.raises(cswap.utils.DomainError):
        control_dist(bell('phi+'), cswap.states.build_unbalanced_ghz(3, 0.))
    with pytest.raises(cswap.utils.DomainError):
        control_dist(StateVector([1, 1, 0, 0]))


def test_control_distribution_clamping():
    dist = cswap.circuit.ControlDistribution(2, {'00': 1., '11': -1e-14})
    assert dist.probability('11') == 0
    with pytest.warns(UserWarning, match='^Warning!'):
        dist = cswap.circuit.ControlDistribution(2, {'00': 1., '11': -1e-9})
    assert dist.probability('11') == 0
    with pytest.raises(cswap.utils.DomainError):
        cswap.circuit.ControlDistribution(2, {'00': 1., '11': -.5})


def test_trailing_cnots_leave_control_alone():
    a, b = random_state(2, 3), random_state(2, 4)
    plain = control_dist(a, b)
    with_cnots = cswap.circuit.run_entanglement_test(
        a, b, trailing_cnots=True).control_dist
    assert numpy.allclose(plain.as_array(), with_cnots.as_array(), atol=1e-12)


def test_ideal_families_simulated(ns=range(2, 9)):
    for n in ns:
        ghz = control_dist(cswap.states.build_unbalanced_ghz(n, 0.))
        assert abs(ghz.p_zero - (.5 + .5**n)) < 1e-10
        w = control_dist(cswap.states.build_unbalanced_w(n, 0.))
        assert abs(w.p_zero - (.5 + .5/n)) < 1e-10
        for bits in cswap.utils.all_bitstrings(n):
            ones = cswap.utils.popcount(bits)
            if ones and ones % 2 == 0:
                assert abs(ghz.probability(bits) - .5**n) < 1e-10
            if ones == 2:
                assert abs(w.probability(bits) - 1./n**2) < 1e-10


def test_run_equivalence_test():
    zero = cswap.engine.new_basis_state(1, 0)
    one = cswap.engine.new_basis_state(1, 1)
    plus = StateVector([SQRT_HALF, SQRT_HALF])
    assert abs(cswap.circuit.run_equivalence_test(zero, zero)) < 1e-12
    assert abs(cswap.circuit.run_equivalence_test(zero, one) - .5) < 1e-12
    assert abs(cswap.circuit.run_equivalence_test(zero, plus) - .25) < 1e-12


def test_check_nondestructive():
    assert abs(cswap.circuit.check_nondestructive(
        cswap.engine.new_basis_state(2, 2)) - 1) < 1e-10
    # overlap with the initial state is P(00) = 3/4
    assert abs(cswap.circuit.check_nondestructive(bell('phi+')) -
               9./16) < 1e-10


def test_two_qubit_final_state():
    for a in [bell('phi+'), bell('psi-'), random_state(2, 5)]:
        result = cswap.circuit.run_entanglement_test(a, keep_final=True)
        expected = cswap.circuit.two_qubit_final_state(a)
        assert numpy.max(numpy.abs(result.final_state.amplitudes -
                                   expected.amplitudes)) < 1e-12
        assert abs(expected.norm() - 1) < 1e-12


def test_build_states():
    ghz2 = cswap.states.build(cswap.states.StateSpec.parse('ghz:2'))
    assert numpy.allclose(ghz2.amplitudes, [SQRT_HALF, 0, 0, SQRT_HALF])
    w3 = cswap.states.build(cswap.states.StateSpec.parse('w:3'))
    expected = numpy.zeros(8)
    expected[[1, 2, 4]] = 1 / numpy.sqrt(3)
    assert numpy.allclose(w3.amplitudes, expected)
    general = cswap.states.build(
        cswap.states.StateSpec.parse('general:[1,0,0,0]'))
    assert numpy.allclose(general.amplitudes, [1, 0, 0, 0])
    product = cswap.states.build(cswap.states.StateSpec.parse('product:010'))
    assert product.amplitudes[2] == 1


def test_builders_check_capacity(monkeypatch):
    monkeypatch.setenv('CSWAP_MAX_QUBITS', '6')
    for text in ['ghz:7', 'w:7', 'unbalanced_ghz:7:0.1',
                 'unbalanced_w:7:0.1', 'corrupted_ghz:7:0.1',
                 'corrupted_w:7:0.1']:
        with pytest.raises(cswap.utils.CapacityError):
            cswap.states.build(cswap.states.StateSpec.parse(text))
    monkeypatch.delenv('CSWAP_MAX_QUBITS')
    with pytest.raises(cswap.utils.CapacityError):
        cswap.states.build(cswap.states.StateSpec.parse('ghz:45'))


def test_build_general_normalization():
    spec = cswap.states.StateSpec('general', amplitudes=[0, 0])
    with pytest.raises(cswap.utils.DomainError):
        cswap.states.build(spec)
    spec = cswap.states.StateSpec('general', amplitudes=[1.1, 0])
    with pytest.raises(cswap.utils.DomainError):
        cswap.states.build(spec)
    spec = cswap.states.StateSpec('general', amplitudes=[1 + 1e-8, 0])
    with pytest.warns(UserWarning, match='^Warning!'):
        state = cswap.states.build(spec)
    assert abs(state.norm() - 1) < 1e-12


def test_state_spec_parsing():
    spec = cswap.states.StateSpec.parse('unbalanced_ghz:3:0.3')
    assert spec.family == 'unbalanced_ghz'
    assert spec.n == 3 and spec.delta == 0.3
    assert cswap.states.StateSpec.from_json(spec.to_json()) == spec
    spec = cswap.states.StateSpec.parse('general:[[0,1],[0,0]]')
    assert spec.amplitudes == [1j, 0]
    for text in ['ghz', 'ghz:x', 'nope:3', 'bell:chi', 'general:{}',
                 'ghz:1']:
        with pytest.raises(cswap.utils.DomainError):
            cswap.states.StateSpec.parse(text)
    with pytest.raises(cswap.utils.DomainError):
        cswap.states.PairSpec(cswap.states.StateSpec.parse('ghz:3'),
                              cswap.states.StateSpec.parse('w:4'))


def test_unbalanced_ghz():
    assert numpy.array_equal(
        cswap.states.build_unbalanced_ghz(4, 0.).amplitudes,
        cswap.states.ghz_amplitudes(4))
    product = cswap.states.build_unbalanced_ghz(3, numpy.pi/4)
    assert numpy.allclose(product.amplitudes,
                          cswap.engine.new_basis_state(3, 0).amplitudes)
    mimic = cswap.states.build_unbalanced_ghz(3, cswap.states.MIMIC_DELTA)
    assert abs(mimic.amplitudes[0] - numpy.sqrt(2./3)) < 1e-12
    assert abs(mimic.amplitudes[7] - numpy.sqrt(1./3)) < 1e-12


def test_unbalanced_w():
    assert numpy.array_equal(
        cswap.states.build_unbalanced_w(4, 0.).amplitudes,
        cswap.states.w_amplitudes(4))
    state = cswap.states.build_unbalanced_w(4, numpy.pi/2)
    assert abs(state.amplitudes[1]) < 1e-12
    for i in range(1, 4):
        assert abs(state.amplitudes[1 << i] - numpy.sqrt(1./3)) < 1e-12
    assert abs(cswap.states.build_unbalanced_w(3, 0.3).norm() - 1) < 1e-12


def test_corrupted_states():
    assert numpy.array_equal(
        cswap.states.build_corrupted('ghz', 3, 0.).amplitudes,
        cswap.states.ghz_amplitudes(3))
    state = cswap.states.build_corrupted('ghz', 3, numpy.pi/2)
    assert numpy.allclose(state.amplitudes,
                          cswap.engine.new_basis_state(3, 1).amplitudes)
    state = cswap.states.build_corrupted('w', 3, 0.2)
    expected = numpy.zeros(8)
    expected[[1, 2, 4]] = numpy.cos(0.2) / numpy.sqrt(3)
    expected[0] = numpy.sin(0.2)
    assert numpy.allclose(state.amplitudes, expected)
    state = cswap.states.build_corrupted('ghz', 3, 0.4, extra_label=3)
    assert abs(state.amplitudes[3] - numpy.sin(0.4)) < 1e-12
    with pytest.raises(cswap.utils.DomainError):
        cswap.states.build_corrupted('w', 3, 0.4, extra_label=2)


def test_concurrence2():
    assert abs(cswap.oracles.concurrence2(bell('phi+')) - 1) < 1e-12
    assert cswap.oracles.concurrence2([1, 0, 0, 0]) == 0
    a = [numpy.sqrt(.8), 0, 0, numpy.sqrt(.2)]
    assert abs(cswap.oracles.concurrence2(a) - .8) < 1e-12


def test_two_qubit_distribution_examples():
    dist = cswap.oracles.two_qubit_distribution(bell('psi+'))
    assert abs(dist.probability('11') - .25) < 1e-12
    dist = cswap.oracles.two_qubit_distribution([1, 0, 0, 0], [0, 0, 0, 1])
    for bits in ['00', '01', '10', '11']:
        assert abs(dist.probability(bits) - .25) < 1e-12
    a = numpy.kron([.6, .8j], [SQRT_HALF, -SQRT_HALF])
    dist = cswap.oracles.two_qubit_distribution(a)
    assert abs(dist.p_zero - 1) < 1e-12


def test_two_qubit_distribution_matches_simulator(trials=1000):
    rng = numpy.random.default_rng(2)
    for i in range(trials):
        a = cswap.verify.random_state(2, rng, real=(i % 2 == 0))
        b = cswap.verify.random_state(2, rng, real=(i % 3 == 0))
        for copy in [a, b]:
            sim = control_dist(a, copy)
            dist = cswap.oracles.two_qubit_distribution(a, copy)
            for bits in cswap.utils.all_bitstrings(2):
                assert abs(sim.probability(bits) -
                           dist.probability(bits)) < 1e-10
        c2 = cswap.oracles.concurrence2(a)
        assert abs(control_dist(a).probability('11') - c2**2 / 4) < 1e-10


def test_three_qubit_equal_distribution(trials=1000):
    dist = cswap.oracles.three_qubit_equal_distribution(
        cswap.states.ghz_amplitudes(3))
    assert abs(dist.p_zero - 5./8) < 1e-12
    dist = cswap.oracles.three_qubit_equal_distribution(
        cswap.states.w_amplitudes(3))
    assert abs(dist.p_zero - 2./3) < 1e-12
    for bits in ['110', '101', '011']:
        assert abs(dist.probability(bits) - 1./9) < 1e-12
    dist = cswap.oracles.three_qubit_equal_distribution(
        cswap.engine.new_basis_state(3, 2))
    assert abs(dist.p_zero - 1) < 1e-12
    rng = numpy.random.default_rng(3)
    for _ in range(trials):
        a = cswap.verify.random_state(3, rng)
        sim = control_dist(a)
        dist = cswap.oracles.three_qubit_equal_distribution(a)
        for bits in cswap.utils.all_bitstrings(3):
            assert abs(sim.probability(bits) - dist.probability(bits)) < 1e-10
        for bits in ['100', '010', '001', '111']:
            assert sim.probability(bits) == 0


def test_maximal_distributions():
    ghz = cswap.oracles.ghz_maximal(2)
    assert ghz.p_zero == .75 and ghz.probability('11') == .25
    assert cswap.oracles.ghz_maximal(3).p_zero == 5./8
    assert abs(cswap.oracles.ghz_maximal(30).p_zero - .5) < 1e-8
    assert cswap.oracles.ghz_maximal(30).per_outcome is None
    assert cswap.oracles.w_maximal(2).p_zero == .75
    w3 = cswap.oracles.w_maximal(3)
    assert abs(w3.class_total(SignatureClass.EXACTLY_TWO_ONES) - 1./3) < 1e-12
    assert abs(w3.probability('110') - 1./9) < 1e-12
    for n in range(2, 9):
        assert abs(cswap.oracles.ghz_maximal(n).total() - 1) < 1e-12
        assert abs(cswap.oracles.w_maximal(n).total() - 1) < 1e-12


def test_degree_cn():
    assert abs(cswap.oracles.degree_cn(control_dist(bell('phi+'))) - 1) \
        < 1e-10
    for n in range(2, 9):
        assert abs(cswap.oracles.degree_cn(cswap.oracles.ghz_maximal(n)) -
                   cswap.oracles.cn_upper_bound(n)) < 1e-12
    product = cswap.engine.new_basis_state(3, 6)
    assert cswap.oracles.degree_cn(control_dist(product)) == 0
    assert abs(cswap.oracles.cn_upper_bound(4) - 1.3229) < 1e-4
    assert abs(cswap.oracles.cn_upper_bound(5) - 1.3693) < 1e-4


def test_ghz_beats_w(ns=range(2, 9)):
    last_cn, last_trials = 0, float('inf')
    for n in ns:
        ghz = cswap.oracles.ghz_maximal(n)
        cn = cswap.oracles.degree_cn(ghz)
        assert last_cn < cn < numpy.sqrt(2)
        trials = cswap.oracles.expected_trials_any(ghz.signature_total)
        assert trials <= last_trials
        w = cswap.oracles.degree_cn(cswap.oracles.w_maximal(n))
        if n >= 3:
            assert w < cn
        else:
            assert abs(w - cn) < 1e-12
        last_cn, last_trials = cn, trials


def test_error_family_limits():
    for n in range(2, 6):
        ghz, w = cswap.oracles.ghz_maximal(n), cswap.oracles.w_maximal(n)
        for family, base in [('unbalanced_ghz', ghz), ('unbalanced_w', w),
                             ('unequal_ghz', ghz), ('unequal_w', w),
                             ('corrupted_ghz', ghz), ('corrupted_w', w)]:
            dist = cswap.oracles.family_dist(family, n, 0.)
            assert abs(dist.p_zero - base.p_zero) < 1e-12
            assert abs(dist.signature_total - base.signature_total) < 1e-12
    assert abs(cswap.oracles.unbalanced_ghz_dist(3, numpy.pi/4).p_zero - 1) \
        < 1e-12
    assert abs(cswap.oracles.corrupted_w_dist(3, numpy.pi/2).p_zero - 1) \
        < 1e-12


def test_error_families_match_simulator():
    cases = [('unbalanced_w', 4, .5), ('unequal_ghz', 3, .4),
             ('corrupted_ghz', 4, .6), ('unbalanced_ghz', 3, -.3),
             ('unequal_w', 4, .7), ('corrupted_w', 3, 1.1)]
    for family, n, x in cases:
        test, copy = cswap.states.error_family_pair(family, n, x)
        sim = control_dist(test, copy)
        dist = cswap.oracles.family_dist(family, n, x)
        for kind in [SignatureClass.ALL_ZERO, SignatureClass.EVEN_ONES,
                     SignatureClass.ODD_ONES]:
            assert abs(sim.class_total(kind) - dist.class_total(kind)) < 1e-10


def test_unequal_ghz():
    dist = cswap.oracles.unequal_ghz_dist(3, SQRT_HALF, SQRT_HALF,
                                          SQRT_HALF, SQRT_HALF)
    assert abs(dist.class_total(SignatureClass.ODD_ONES)) < 1e-12
    dist = cswap.oracles.unequal_ghz_delta_dist(3, .2)
    assert abs(dist.class_total(SignatureClass.ODD_ONES) -
               numpy.sin(.2)**2 / 2) < 1e-12
    with pytest.raises(cswap.utils.DomainError):
        cswap.oracles.unequal_ghz_dist(3, 1, 1, 1, 0)


def test_unequal_w_per_outcome():
    rng = numpy.random.default_rng(4)
    a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    b = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    a, b = a / numpy.linalg.norm(a), b / numpy.linalg.norm(b)

    def embed(x):
        amps = numpy.zeros(8, dtype=numpy.complex128)
        amps[[1, 2, 4]] = x
        return StateVector(amps)

    sim = control_dist(embed(a), embed(b))
    dist = cswap.oracles.unequal_w_dist(3, a, b)
    for bits in cswap.utils.all_bitstrings(3):
        assert abs(sim.probability(bits) - dist.probability(bits)) < 1e-10
    same = cswap.oracles.unequal_w_dist(3, a, a)
    assert abs(same.class_total(SignatureClass.EXACTLY_ONE_ONE)) < 1e-12


def test_dual_forms(ns=range(2, 9)):
    for family in cswap.oracles.ERROR_FAMILIES:
        for n in ns:
            for x in numpy.linspace(-numpy.pi/2, numpy.pi/2, 101):
                other = cswap.oracles.family_amplitude_dist(family, n, x)
                if other is None:
                    continue
                dist = cswap.oracles.family_dist(family, n, x)
                for kind in [SignatureClass.ALL_ZERO, SignatureClass.EVEN_ONES,
                             SignatureClass.ODD_ONES]:
                    assert abs(dist.class_total(kind) -
                               other.class_total(kind)) < 1e-12


def test_leading_order_errors(ns=range(2, 9)):
    for family in cswap.oracles.ERROR_FAMILIES:
        for n in ns:
            base = cswap.oracles.family_dist(family, n, 0.)
            errors = cswap.oracles.leading_order_errors(family, n)
            for x in [1e-2, 1e-3]:
                dist = cswap.oracles.family_dist(family, n, x)
                for kind, (coefficient, order) in errors.items():
                    fitted = abs(dist.class_total(kind) -
                                 base.class_total(kind)) / x**order
                    assert abs(fitted - coefficient) < .01 * coefficient
    errors = cswap.oracles.leading_order_errors('unbalanced_ghz', 3)
    assert errors[SignatureClass.ALL_ZERO] == (1.5, 2)
    errors = cswap.oracles.leading_order_errors('unequal_ghz', 3)
    assert errors[SignatureClass.ODD_ONES] == (.5, 2)
    errors = cswap.oracles.leading_order_errors('corrupted_w', 4)
    assert errors[SignatureClass.ALL_ZERO] == (.75, 2)


def test_expected_trials():
    assert cswap.oracles.expected_trials_any(.25) == 4
    assert cswap.oracles.expected_trials_any(1) == 1
    assert cswap.oracles.expected_trials_any(0) == cswap.oracles.UNDETECTABLE
    ghz8 = cswap.oracles.ghz_maximal(8).signature_total
    assert 2 < cswap.oracles.expected_trials_any(ghz8) < 2.02
    assert cswap.oracles.expected_trials_from_degree(1) == 4
    with pytest.raises(cswap.utils.DomainError):
        cswap.oracles.expected_trials_any(1.5)


def test_expected_trials_genuine():
    ghz, w = cswap.oracles.GHZ_LIKE, cswap.oracles.W_LIKE
    assert cswap.oracles.expected_trials_genuine(2, ghz, .25) == 4
    assert abs(cswap.oracles.expected_trials_genuine(3, ghz, 3./8) -
               64./9) < 1e-12
    assert abs(cswap.oracles.expected_trials_genuine(3, w, 1./3) - 9) < 1e-12
    assert cswap.oracles.genuine_exponent(5, ghz) == 8
    assert cswap.oracles.genuine_exponent(5, w) == 7
    assert cswap.oracles.expected_trials_genuine(3, w, 0) == \
        cswap.oracles.UNDETECTABLE


def test_tomography():
    assert cswap.oracles.tomography_baseline(2) == 9
    assert cswap.oracles.tomography_baseline(4) == 81
    assert abs(cswap.oracles.tomography_crossover(4) - 2./9) < 1e-12
    assert abs(cswap.oracles.tomography_crossover(5) - .128) < .0005
    low, high = cswap.oracles.tomography_advantage_range(4)
    assert low < 1.32 < high < 1.33


def test_locc_monotonicity():
    ghz3 = cswap.states.build_unbalanced_ghz(3, 0.)
    w3 = cswap.states.build_unbalanced_w(3, 0.)
    for qubit in range(3):
        record = cswap.oracles.locc_monotonicity_check(ghz3, qubit)
        assert abs(record.expected_post_c2) < 1e-12
        assert not record.inequality_holds_as_written
        record = cswap.oracles.locc_monotonicity_check(w3, qubit)
        assert abs(record.expected_post_c2 - 2./3) < 1e-10
        assert abs(sum(record.probabilities) - 1) < 1e-12
    record = cswap.oracles.locc_monotonicity_check(
        cswap.engine.new_basis_state(3, 0), 1)
    assert record.c3 == 0 and record.expected_post_c2 == 0
    json.dumps(record.to_json())


def test_locc_reversed_direction_holds(trials=1000):
    rng = numpy.random.default_rng(5)
    for i in range(trials):
        a = cswap.verify.random_state(3, rng)
        record = cswap.oracles.locc_monotonicity_check(a, i % 3)
        assert record.inequality_holds_reversed


def test_sample_deterministic():
    dist = control_dist(bell('psi+'))
    first = cswap.estimate.sample(dist, 1000, cswap.estimate.RngSpec(3))
    second = cswap.estimate.sample(dist, 1000, cswap.estimate.RngSpec(3))
    assert first.counts == second.counts
    assert json.dumps(first.to_json()) == json.dumps(second.to_json())
    other = cswap.estimate.sample(dist, 1000, cswap.estimate.RngSpec(3, 1))
    assert other.total_shots == 1000
    counts = cswap.estimate.sample(
        control_dist(cswap.engine.new_basis_state(2, 1)), 50, 9)
    assert counts.counts == {'00': 50}


def test_shot_counts_validation():
    with pytest.raises(cswap.utils.DomainError):
        cswap.estimate.ShotCounts(2, {'00': 3}, total_shots=4)
    with pytest.raises(cswap.utils.DomainError):
        cswap.estimate.ShotCounts(2, {'000': 3})
    counts = cswap.estimate.ShotCounts(2, {'00': 3, '11': 1})
    assert cswap.estimate.ShotCounts.from_json(
        json.dumps(counts.to_json())).counts == counts.counts
    with pytest.raises(cswap.utils.DomainError):
        cswap.estimate.RngSpec(-1)


def test_bell_sampling_statistics(seeds=range(20), shots=10**6):
    dist = control_dist(bell('psi+'))
    sigma = numpy.sqrt(.25 * .75 / shots)
    hits = 0
    for seed in seeds:
        counts = cswap.estimate.sample(dist, shots,
                                       cswap.estimate.RngSpec(seed))
        hits += abs(counts.count('11') / float(shots) - .25) < 3 * sigma
    assert hits >= 19


def test_estimate_signature_probability():
    counts = cswap.estimate.ShotCounts(3, {'000': 100})
    assert cswap.estimate.estimate_signature_probability(counts) == (0, 0)
    assert cswap.estimate.estimate_cn(counts)[0] == 0
    assert cswap.estimate.classify(counts).entangled == \
        cswap.estimate.NOT_DETECTED_IN_BUDGET
    assert cswap.estimate.expected_trials_estimate(counts) == \
        cswap.oracles.UNDETECTABLE


@flaky.flaky
def test_estimates_from_samples(shots=10**6):
    ghz4 = control_dist(cswap.states.build_unbalanced_ghz(4, 0.))
    counts = cswap.estimate.sample(ghz4, shots, 11)
    p, se = cswap.estimate.estimate_signature_probability(counts)
    assert abs(p - .4375) < 4 * se
    for state, c in [(bell('phi+'), 1.),
                     (cswap.states.build_unbalanced_w(3, 0.),
                      2 * numpy.sqrt(1./3))]:
        counts = cswap.estimate.sample(control_dist(state), shots, 12)
        estimate, sigma = cswap.estimate.estimate_cn(counts)
        assert abs(estimate - c) < 3 * sigma


@flaky.flaky
def test_trials_to_first_signature():
    mean, se = cswap.estimate.trials_to_first_signature(
        control_dist(bell('phi+')), cswap.estimate.RngSpec(0), 10**5)
    assert abs(mean - 4) < .2
    assert se < .05
    half = cswap.circuit.ControlDistribution(2, {'00': .5, '11': .5})
    mean, _ = cswap.estimate.trials_to_first_signature(half, 1, 10**4)
    assert abs(mean - 2) < .1
    certain = cswap.circuit.ControlDistribution(2, {'11': 1.})
    assert cswap.estimate.trials_to_first_signature(certain, 2, 100) == \
        (1., 0.)
    with pytest.raises(cswap.utils.UndetectableError):
        cswap.estimate.trials_to_first_signature(
            control_dist(cswap.engine.new_basis_state(2, 0)), 3, 10)


@flaky.flaky
def test_trials_to_first_signature_is_geometric(repetitions=10**5):
    for seed, p in enumerate([3./8, 1./3, .5 - 1./256]):
        dist = cswap.circuit.ControlDistribution(2, {'00': 1 - p, '11': p})
        mean, se = cswap.estimate.trials_to_first_signature(
            dist, cswap.estimate.RngSpec(seed), repetitions)
        assert abs(mean - 1 / p) < 4 * se
        # geometric standard deviation sqrt(1 - p)/p
        expected_se = numpy.sqrt(1 - p) / p / numpy.sqrt(repetitions)
        assert abs(se - expected_se) < .1 * expected_se


@flaky.flaky
def test_sampling_matches_every_family(ns=range(2, 7), seeds=range(20),
                                       shots=10**6):
    pairs = []
    for n in ns:
        pairs.append(('ghz', n, cswap.states.build_unbalanced_ghz(n, 0.),
                      None))
        pairs.append(('w', n, cswap.states.build_unbalanced_w(n, 0.), None))
        for family in cswap.oracles.ERROR_FAMILIES:
            a, b = cswap.states.error_family_pair(family, n, .3)
            pairs.append((family, n, a, b))
    kinds = [SignatureClass.ALL_ZERO, SignatureClass.EVEN_ONES,
             SignatureClass.ODD_ONES]
    for family, n, a, b in pairs:
        dist = control_dist(a, b)
        hits = 0
        for seed in seeds:
            counts = cswap.estimate.sample(dist, shots,
                                           cswap.estimate.RngSpec(seed))
            ok = True
            for kind in kinds:
                p = dist.class_total(kind)
                p_hat, _ = cswap.estimate.estimate_signature_probability(
                    counts, kind)
                sigma = numpy.sqrt(p * (1 - p) / shots)
                ok = ok and abs(p_hat - p) <= max(4 * sigma, 1e-12)
            hits += ok
        assert hits >= 19, (family, n, hits)


def test_classify_never_detects_product_states(seeds=range(50)):
    rng = numpy.random.default_rng(5)
    for seed in seeds:
        n = 2 + seed % 4
        label = int(rng.integers(2**n))
        dist = control_dist(cswap.engine.new_basis_state(n, label))
        report = cswap.estimate.classify(cswap.estimate.sample(
            dist, 1000, cswap.estimate.RngSpec(seed)))
        assert report.entangled == cswap.estimate.NOT_DETECTED_IN_BUDGET
        assert not report.detected
        assert not report.unequal_copies_flag


def test_classify():
    ghz4 = control_dist(cswap.states.build_unbalanced_ghz(4, 0.))
    report = cswap.estimate.classify(cswap.estimate.sample(ghz4, 10**4, 1))
    assert report.detected
    assert report.class_hint == cswap.oracles.GHZ_LIKE
    assert '1111' in report.signatures_seen
    w5 = control_dist(cswap.states.build_unbalanced_w(5, 0.))
    report = cswap.estimate.classify(cswap.estimate.sample(w5, 10**4, 2))
    assert report.class_hint == cswap.oracles.W_LIKE
    assert not report.unequal_copies_flag
    few = cswap.estimate.ShotCounts(5, {'00000': 10, '11000': 1})
    assert cswap.estimate.classify(few).class_hint == \
        cswap.estimate.INDETERMINATE
    json.dumps(report.to_json())


def test_mimic_has_the_w3_distribution():
    mimic = control_dist(cswap.states.build_unbalanced_ghz(
        3, cswap.states.MIMIC_DELTA))
    w3 = control_dist(cswap.states.build_unbalanced_w(3, 0.))
    for kind in SignatureClass.KINDS:
        assert abs(mimic.class_total(kind) - w3.class_total(kind)) < 1e-10


@flaky.flaky
def test_resolve_ghz3_w3_mimic(rounds=10**4):
    mimic = cswap.states.build_unbalanced_ghz(3, cswap.states.MIMIC_DELTA)
    res = cswap.estimate.resolve_ghz3_w3_mimic(mimic, rounds, 1)
    assert res.detections == 0
    assert res.verdict == cswap.estimate.UNBALANCED_GHZ3
    assert res.confidence > .999
    w3 = cswap.states.build_unbalanced_w(3, 0.)
    res = cswap.estimate.resolve_ghz3_w3_mimic(w3, rounds, 2)
    assert res.verdict == cswap.estimate.W3_LIKE
    assert abs(res.detection_rate - 1./6) < 4 * res.standard_error
    assert res.to_json()['standard_error'] == res.standard_error
    product = cswap.engine.new_basis_state(3, 0)
    res = cswap.estimate.resolve_ghz3_w3_mimic(product, 100, 3)
    assert res.verdict == cswap.estimate.UNBALANCED_GHZ3


@flaky.flaky
def test_resolve_mimic_independent_collapse(rounds=10**4):
    sigma = numpy.sqrt(1./9 * 8./9 / rounds)
    for state in [cswap.states.build_unbalanced_w(3, 0.),
                  cswap.states.build_unbalanced_ghz(
                      3, cswap.states.MIMIC_DELTA)]:
        res = cswap.estimate.resolve_ghz3_w3_mimic(
            state, rounds, 4, independent_collapse=True)
        assert abs(res.detection_rate - 1./9) < 3 * sigma


def test_sweep():
    df = cswap.figures.sweep('unbalanced_ghz', [2], [numpy.pi/4])
    assert list(df.columns) == cswap.figures.SWEEP_COLUMNS
    assert abs(df['p_zero'][0] - 1) < 1e-12
    df = cswap.figures.sweep('unequal_ghz', [3], [.2],
                             include_simulation=True)
    assert abs(df['odd'][0] - numpy.sin(.2)**2 / 2) < 1e-12
    assert df['discrepancy'][0] < 1e-10
    df = cswap.figures.sweep('corrupted_w', [4], [0.])
    assert abs(df['p_zero'][0] - 5./8) < 1e-12
    assert numpy.isnan(df['p_zero_amplitude_form'][0])
    df = cswap.figures.sweep('unequal_w', [3, 2], [.5, -.5, 0.])
    assert list(df['n']) == [2, 2, 2, 3, 3, 3]
    assert list(df['parameter'][:3]) == [-.5, 0., .5]
    with pytest.raises(cswap.utils.DomainError):
        cswap.figures.sweep('bogus', [2])


def test_parse_grid():
    assert cswap.figures.parse_grid('0:1:3') == [0., .5, 1.]
    for text in ['0:1', 'a:b:c', '0:1:0']:
        with pytest.raises(cswap.utils.DomainError):
            cswap.figures.parse_grid(text)


def test_figure_datasets():
    fig3 = cswap.figures.fig3(include_simulation=False)
    row = fig3[(fig3['family'] == 'ghz') & (fig3['n'] == 8)].iloc[0]
    assert abs(row['p_zero'] - (.5 + 1./256)) < 1e-12
    fig4 = cswap.figures.fig4([2, 3])
    row = fig4[(fig4['family'] == 'ghz') & (fig4['n'] == 2)].iloc[0]
    assert abs(row['c_n'] - 1) < 1e-12
    assert abs(row['simulated_c_n'] - 1) < 1e-10
    fig5 = cswap.figures.fig5([4])
    assert abs(fig5['crossover'][0] - 2./9) < 1e-12
    at_crossover = fig5[numpy.isclose(fig5['c_n'], 2./9)]
    assert abs(at_crossover['expected_trials'].iloc[0] - 81) < 1e-9
    assert fig5['advantage'].iloc[-1]
    fig6 = cswap.figures.fig6([3])
    assert list(fig6['exponent']) == [2, 2]


def test_write_figures(tmpdir):
    first = cswap.figures.write_figures(str(tmpdir.join('a')), [2, 3])
    second = cswap.figures.write_figures(str(tmpdir.join('b')), [2, 3])
    assert [os.path.basename(p) for p in first] == \
        ['fig%d.csv' % i for i in range(3, 10)]
    for a, b in zip(first, second):
        with open(a) as fa, open(b) as fb:
            assert fa.read() == fb.read()
    df = pandas.read_csv(first[-1])
    assert list(df.columns) == cswap.figures.SWEEP_COLUMNS
    assert len(df) == 2 * 2 * cswap.figures.GRID_POINTS
    assert df['simulated_p_zero'].notnull().all()
    assert df['discrepancy'].max() < 1e-10
    fig3 = pandas.read_csv(first[0])
    assert fig3['simulated_p_zero'].notnull().all()
    bare = cswap.figures.write_figures(str(tmpdir.join('c')), [2],
                                       include_simulation=False)
    assert pandas.read_csv(bare[-1])['discrepancy'].isnull().all()


def test_verify_small():
    report = cswap.verify.run_all(n_max=3, trials=50, seed=1)
    assert list(report.columns) == cswap.verify.REPORT_COLUMNS
    assert report['passed'].all()
    again = cswap.verify.run_all(n_max=3, trials=50, seed=1)
    pandas.testing.assert_frame_equal(report, again)
    with pytest.raises(cswap.utils.DomainError):
        cswap.verify.run_all(n_max=9)


def test_verify_default():
    report = cswap.verify.run_all()
    assert report['passed'].all()
    assert 'three_qubit_equal' in list(report['name'])


def run_cli(capsys, *argv):
    status = cswap.cli.main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_cli_run(capsys):
    status, out, _ = run_cli(capsys, 'run', '--test', 'bell:psi+')
    assert status == 0
    res = json.loads(out)
    assert sorted(res['distribution']) == ['00', '11']
    assert abs(res['distribution']['00'] - .75) < 1e-10
    assert abs(res['distribution']['11'] - .25) < 1e-10
    assert abs(res['c_n'] - 1) < 1e-10
    assert abs(res['expected_trials'] - 4) < 1e-9
    status, out, _ = run_cli(capsys, 'run', '--test', 'general:[1,0,0,0]')
    res = json.loads(out)
    assert list(res['distribution']) == ['00']
    assert abs(res['distribution']['00'] - 1) < 1e-12
    assert not res['entangled']
    assert res['expected_trials'] == cswap.oracles.UNDETECTABLE


def test_cli_run_sampled(capsys):
    status, out, _ = run_cli(capsys, 'run', '--test', 'ghz:5', '--shots',
                             '1000000', '--seed', '7')
    assert status == 0
    res = json.loads(out)
    counts = res['samples']['counts']
    even = sum(c for bits, c in counts.items()
               if cswap.utils.popcount(bits) % 2 == 0 and '1' in bits)
    assert abs(even / 1e6 - .46875) < .0025
    assert res['samples']['rng'] == {'algorithm': 'PCG64',
                                     'numpy': numpy.__version__,
                                     'seed': 7, 'stream': 0}


def test_cli_run_csv(capsys, tmpdir):
    path = str(tmpdir.join('run.csv'))
    status, _, _ = run_cli(capsys, 'run', '--test', 'bell:phi+',
                           '--format', 'csv', '--out', path)
    assert status == 0
    df = pandas.read_csv(path, dtype={'outcome': str})
    assert list(df.columns) == cswap.cli.RUN_COLUMNS
    assert list(df['outcome']) == ['00', '10', '01', '11']


def test_cli_test_file(capsys, tmpdir):
    path = tmpdir.join('pair.json')
    path.write(json.dumps({
        'test': {'family': 'general',
                 'amplitudes': [[SQRT_HALF, 0], 0, 0, [SQRT_HALF, 0]]},
        'copy': {'family': 'ghz', 'n': 2}}))
    status, out, _ = run_cli(capsys, 'run', '--test-file', str(path))
    assert status == 0
    assert abs(json.loads(out)['distribution']['11'] - .25) < 1e-10


def test_cli_errors(capsys):
    status, _, err = run_cli(capsys, 'run', '--test', 'ghz:9')
    assert status == 2
    assert err.startswith('error:')
    status, _, err = run_cli(capsys, 'run', '--test', 'ghz:x')
    assert status == 2
    status, _, err = run_cli(capsys, 'run', '--test', 'ghz:3', '--copy',
                             'w:4')
    assert status == 2
    status, _, err = run_cli(capsys, 'run', '--test-file', '/nonexistent')
    assert status == 2
    status, _, err = run_cli(capsys, 'run', '--test', 'ghz:45')
    assert status == 2
    assert err.startswith('error:')
    status, _, err = run_cli(capsys, 'run', '--test', 'w:40', '--shots', '10')
    assert status == 2
    with pytest.raises(SystemExit):
        cswap.cli.main(['sweep', '--family', 'bogus'])


def test_cli_sweep(capsys):
    status, out, _ = run_cli(capsys, 'sweep', '--family', 'unequal_ghz',
                             '--n', '3', '--grid', '0.2:0.2:1',
                             '--include-simulation', '--quiet')
    assert status == 0
    df = pandas.read_csv(io.StringIO(out))
    assert list(df.columns) == cswap.figures.SWEEP_COLUMNS
    assert abs(df['odd'][0] - .0197346) < 1e-6
    assert df['discrepancy'][0] < 1e-10


def test_cli_figures_simulate_by_default():
    parser = cswap.cli.build_parser()
    assert parser.parse_args(['figures']).include_simulation
    args = parser.parse_args(['figures', '--no-simulation'])
    assert not args.include_simulation


def test_cli_verify(capsys):
    status, out, _ = run_cli(capsys, 'verify', '--n-max', '3', '--trials',
                             '20', '--quiet')
    assert status == 0
    df = pandas.read_csv(io.StringIO(out))
    assert df['passed'].all()
    status, _, err = run_cli(capsys, 'verify', '--n-max', '1', '--quiet')
    assert status == 2


def test_cli_estimate(capsys):
    status, out, _ = run_cli(capsys, 'estimate', '--test', 'ghz:3',
                             '--copy', 'unbalanced_ghz:3:0.3',
                             '--shots', '1000000')
    assert status == 0
    res = json.loads(out)
    assert res['unequal_copies_flag']
    counts = res['samples']['counts']
    odd = sum(c for bits, c in counts.items()
              if cswap.utils.popcount(bits) % 2 == 1)
    assert abs(odd / 1e6 - numpy.sin(.3)**2 / 2) < .002
    status, out, _ = run_cli(capsys, 'estimate', '--test', 'w:4',
                             '--shots', '1000000')
    c = json.loads(out)['c_n_estimate']
    assert abs(c['value'] - 2 * numpy.sqrt(3./8)) < 4 * c['stderr']
    status, out, _ = run_cli(capsys, 'estimate', '--test', 'product:0101',
                             '--shots', '1000', '--repetitions', '10',
                             '--quiet')
    res = json.loads(out)
    assert res['entangled'] == cswap.estimate.NOT_DETECTED_IN_BUDGET
    assert res['c_n_estimate']['value'] == 0
    assert res['trials_to_first_signature'] == cswap.oracles.UNDETECTABLE
    status, _, _ = run_cli(capsys, 'estimate', '--test', 'w:3', '--shots',
                           '0')
    assert status == 2
