import numpy
import pandas
import progressbar
import scipy.stats

from cswap import oracles, states
from cswap.circuit import check_nondestructive, fredkin_decomposition, \
    run_entanglement_test, run_equivalence_test, two_qubit_final_state
from cswap.engine import CNOT, FREDKIN, H, TOFFOLI, StateVector, \
    apply_circuit, apply_gate, inner_product, tensor
from cswap.utils import DomainError, GATE_TOLERANCE, SignatureClass, \
    all_bitstrings, label_to_bits

__all__ = ['run_all', 'BATTERIES', 'REPORT_COLUMNS']


ORACLE_TOLERANCE = 1e-10
DUAL_FORM_TOLERANCE = 1e-12
LEADING_ORDER_TOLERANCE = 0.01

ERROR_GRID = [-0.6, -0.3, 0., 0.3, 0.6, numpy.pi/4]
SMALL_PARAMETERS = [1e-2, 1e-3]

REPORT_COLUMNS = ['name', 'samples', 'max_discrepancy', 'tolerance',
                  'passed']


def random_state(m, rng, real=False):
    ''' Haar-random m-qubit state, or a uniformly random real one. '''
    if real:
        a = rng.standard_normal(2**m)
        return StateVector(a / numpy.linalg.norm(a))
    u = scipy.stats.unitary_group.rvs(2**m, random_state=rng)
    return StateVector(u[:, 0])


def _random_states(m, count, rng):
    # Half real, half complex
    return [random_state(m, rng, real=(i % 2 == 0)) for i in range(count)]


def _row(name, samples, discrepancy, tolerance):
    return {'name': name, 'samples': int(samples),
            'max_discrepancy': float(discrepancy),
            'tolerance': float(tolerance),
            'passed': bool(discrepancy < tolerance)}


def _dist_discrepancy(sim, per_outcome):
    n = sim.n
    return max(abs(sim.probability(bits) - per_outcome.get(bits, 0.))
               for bits in all_bitstrings(n))


def gate_involutions(n_max, trials, rng):
    ''' Every gate applied twice gives back the input. Also tracks the
    norm drift after a single application. '''
    worst, samples = 0., 0
    for m in range(3, 6):
        for _ in range(min(trials, 100)):
            psi = random_state(m, rng)
            q = rng.permutation(m)[:3].tolist()
            for gate in [H(q[0]), CNOT(q[0], q[1]), TOFFOLI(q[0], q[1], q[2]),
                         FREDKIN(q[0], q[1], q[2])]:
                phi = apply_gate(psi.copy(), gate)
                worst = max(worst, abs(phi.norm() - 1))
                apply_gate(phi, gate)
                worst = max(worst, numpy.max(numpy.abs(
                    phi.amplitudes - psi.amplitudes)))
                samples += 1
    return _row('gate_involutions', samples, worst, GATE_TOLERANCE)


def _fredkin_matrix(c, a, b, m):
    # Brute-force permutation matrix straight from the definition
    size = 2**m
    matrix = numpy.zeros((size, size))
    for label in range(size):
        target = label
        if (label >> c) & 1 and ((label >> a) & 1) != ((label >> b) & 1):
            target = label ^ (1 << a) ^ (1 << b)
        matrix[target, label] = 1
    return matrix


def fredkin_decomposition_battery(n_max, trials, rng):
    ''' Native Fredkin, its CNOT/Toffoli decomposition and the explicit
    8 x 8 matrix all agree. '''
    worst = 0.
    matrix = _fredkin_matrix(2, 0, 1, 3)
    for _ in range(trials):
        psi = random_state(3, rng)
        native = apply_gate(psi.copy(), FREDKIN(2, 0, 1))
        decomposed = apply_circuit(psi.copy(), fredkin_decomposition(2, 0, 1))
        expected = matrix.dot(psi.amplitudes)
        worst = max(worst,
                    numpy.max(numpy.abs(native.amplitudes - expected)),
                    numpy.max(numpy.abs(decomposed.amplitudes - expected)))
    return _row('fredkin_decomposition', trials, worst, GATE_TOLERANCE)


def two_qubit_equal(n_max, trials, rng):
    ''' Two-qubit equal copies: simulator, closed form and C2^2/4. '''
    worst = 0.
    for a in _random_states(2, trials, rng):
        sim = run_entanglement_test(a).control_dist
        dist = oracles.two_qubit_distribution(a)
        c2 = oracles.concurrence2(a)
        worst = max(worst, _dist_discrepancy(sim, dist.per_outcome),
                    abs(sim.probability('11') - c2**2 / 4))
    return _row('two_qubit_equal', trials, worst, ORACLE_TOLERANCE)


def two_qubit_unequal(n_max, trials, rng):
    worst = 0.
    tests = _random_states(2, trials, rng)
    copies = _random_states(2, trials, rng)
    for a, b in zip(tests, copies):
        sim = run_entanglement_test(a, b).control_dist
        dist = oracles.two_qubit_distribution(a, b)
        worst = max(worst, _dist_discrepancy(sim, dist.per_outcome))
    return _row('two_qubit_unequal', trials, worst, ORACLE_TOLERANCE)


def three_qubit_equal(n_max, trials, rng):
    ''' Three-qubit equal copies against the closed form, including the
    four outcomes that must be exactly zero. '''
    if n_max < 3:
        return None
    worst = 0.
    for a in _random_states(3, trials, rng):
        sim = run_entanglement_test(a).control_dist
        dist = oracles.three_qubit_equal_distribution(a)
        worst = max(worst, _dist_discrepancy(sim, dist.per_outcome),
                    max(sim.probability(b) for b in
                        ('100', '010', '001', '111')))
    return _row('three_qubit_equal', trials, worst, ORACLE_TOLERANCE)


def ideal_families(n_max, trials, rng):
    worst, samples = 0., 0
    for n in range(2, n_max + 1):
        for dist, state in [
                (oracles.ghz_maximal(n), states.build_unbalanced_ghz(n, 0.)),
                (oracles.w_maximal(n), states.build_unbalanced_w(n, 0.))]:
            sim = run_entanglement_test(state).control_dist
            worst = max(worst, _dist_discrepancy(sim, dist.per_outcome))
            samples += 1
    return _row('ideal_families', samples, worst, ORACLE_TOLERANCE)


def _class_discrepancy(sim, dist):
    return max(abs(sim.class_total(kind) - dist.class_total(kind))
               for kind in (SignatureClass.ALL_ZERO, SignatureClass.EVEN_ONES,
                            SignatureClass.ODD_ONES))


def error_families(n_max, trials, rng):
    ''' Closed forms of the six error families against the simulator. '''
    worst, samples = 0., 0
    for family in oracles.ERROR_FAMILIES:
        for n in range(2, n_max + 1):
            for x in ERROR_GRID:
                test, copy = states.error_family_pair(family, n, x)
                sim = run_entanglement_test(test, copy).control_dist
                worst = max(worst, _class_discrepancy(
                    sim, oracles.family_dist(family, n, x)))
                samples += 1
    return _row('error_families', samples, worst, ORACLE_TOLERANCE)


def dual_forms(n_max, trials, rng):
    ''' Trigonometric and amplitude forms agree on a 101-point grid. '''
    worst, samples = 0., 0
    for family in oracles.ERROR_FAMILIES:
        for n in range(2, n_max + 1):
            for x in numpy.linspace(-numpy.pi/2, numpy.pi/2, 101):
                amplitude_form = oracles.family_amplitude_dist(family, n, x)
                if amplitude_form is None:
                    continue
                worst = max(worst, _class_discrepancy(
                    oracles.family_dist(family, n, x), amplitude_form))
                samples += 1
    return _row('dual_forms', samples, worst, DUAL_FORM_TOLERANCE)


def leading_order(n_max, trials, rng):
    ''' Relative error of the fitted small-parameter coefficients. '''
    worst, samples = 0., 0
    for family in oracles.ERROR_FAMILIES:
        for n in range(2, n_max + 1):
            base = oracles.family_dist(family, n, 0.)
            expected = oracles.leading_order_errors(family, n)
            for x in SMALL_PARAMETERS:
                dist = oracles.family_dist(family, n, x)
                for kind, (coefficient, order) in expected.items():
                    deviation = abs(dist.class_total(kind) -
                                    base.class_total(kind))
                    fitted = deviation / x**order
                    worst = max(worst,
                                abs(fitted - coefficient) / coefficient)
                    samples += 1
    return _row('leading_order', samples, worst, LEADING_ORDER_TOLERANCE)


def _random_product_state(n, rng):
    state = random_state(1, rng)
    for _ in range(n - 1):
        state = tensor(state, random_state(1, rng))
    return state


def nondestructive(n_max, trials, rng):
    ''' Product states come out untouched. Two-qubit final states match the
    closed form, and the fidelity is P(0...0)^2. '''
    worst, samples = 0., 0
    for n in range(1, min(n_max, 4) + 1):
        for _ in range(min(trials, 20)):
            worst = max(worst, abs(check_nondestructive(
                _random_product_state(n, rng)) - 1))
            samples += 1
    for a in _random_states(2, min(trials, 100), rng):
        result = run_entanglement_test(a, keep_final=True)
        expected = two_qubit_final_state(a)
        worst = max(worst, numpy.max(numpy.abs(
            result.final_state.amplitudes - expected.amplitudes)))
        worst = max(worst, abs(check_nondestructive(a) -
                               result.control_dist.p_zero**2))
        samples += 1
    return _row('nondestructive', samples, worst, ORACLE_TOLERANCE)


def _permute_qubits(state, perm):
    # New qubit i is old qubit perm[i]
    m = state.num_qubits
    view = state.tensor_view()
    axes = [m - 1 - perm[m - 1 - k] for k in range(m)]
    return StateVector(numpy.transpose(view, axes).reshape(-1))


def symmetries(n_max, trials, rng):
    ''' Permuting test qubits permutes outcomes the same way. A global
    phase changes nothing. '''
    worst, samples = 0., 0
    for n in range(2, min(n_max, 4) + 1):
        for _ in range(min(trials, 20)):
            a = random_state(n, rng)
            b = random_state(n, rng)
            base = run_entanglement_test(a, b).control_dist
            perm = rng.permutation(n).tolist()
            permuted = run_entanglement_test(
                _permute_qubits(a, perm), _permute_qubits(b, perm)
            ).control_dist
            for label in range(2**n):
                bits = label_to_bits(label, n)
                moved = ''.join(bits[perm[i]] for i in range(n))
                worst = max(worst, abs(base.probability(bits) -
                                       permuted.probability(moved)))
            phase = numpy.exp(1j * rng.uniform(0, 2 * numpy.pi))
            shifted = run_entanglement_test(
                StateVector(phase * a.amplitudes),
                StateVector(phase * b.amplitudes)).control_dist
            worst = max(worst, numpy.max(numpy.abs(
                shifted.as_array() - base.as_array())))
            samples += 1
    return _row('symmetries', samples, worst, ORACLE_TOLERANCE)


def equivalence_test(n_max, trials, rng):
    worst, samples = 0., 0
    for m in (1, 2):
        for _ in range(min(trials, 100)):
            psi, phi = random_state(m, rng), random_state(m, rng)
            expected = (1 - abs(inner_product(psi, phi))**2) / 2
            worst = max(worst, abs(run_equivalence_test(psi, phi) - expected))
            samples += 1
    return _row('equivalence_test', samples, worst, ORACLE_TOLERANCE)


def locc(n_max, trials, rng):
    ''' C_3 never falls below the average concurrence left after measuring
    one qubit. W_3 leaves 2/3 on average. '''
    if n_max < 3:
        return None
    worst, samples = 0., 0
    w3 = states.build_unbalanced_w(3, 0.)
    for qubit in (0, 1, 2):
        record = oracles.locc_monotonicity_check(w3, qubit)
        worst = max(worst, abs(record.expected_post_c2 - 2./3))
    for a in _random_states(3, trials, rng):
        record = oracles.locc_monotonicity_check(
            a, int(rng.integers(0, 3)))
        worst = max(worst, record.expected_post_c2 - record.c3)
        samples += 1
    return _row('locc', samples, worst, ORACLE_TOLERANCE)


BATTERIES = [
    gate_involutions,
    fredkin_decomposition_battery,
    two_qubit_equal,
    two_qubit_unequal,
    three_qubit_equal,
    ideal_families,
    error_families,
    dual_forms,
    leading_order,
    nondestructive,
    symmetries,
    equivalence_test,
    locc,
]


def run_all(n_max=6, trials=1000, seed=0, progress=False):
    ''' Runs every battery and returns one row per battery.

    :param n_max: largest test-state width, 2 <= n_max <= 8
    :param trials: random states per sampled battery
    :param seed: seed of the random test states
    :param progress: boolean, shows a progress bar over the batteries
    :returns: pandas DataFrame with the columns of :data:`REPORT_COLUMNS`
    '''
    if not 2 <= n_max <= 8:
        raise DomainError('n_max must be in [2, 8], got %d' % n_max)
    if trials < 1:
        raise DomainError('Need at least one trial, got %d' % trials)
    rng = numpy.random.default_rng(seed)
    batteries = BATTERIES
    if progress:
        batteries = progressbar.progressbar(batteries)
    rows = []
    for battery in batteries:
        row = battery(n_max, trials, rng)
        if row is not None:
            rows.append(row)
    return pandas.DataFrame(rows, columns=REPORT_COLUMNS)
