import numpy
import warnings

from cswap.engine import CNOT, FREDKIN, H, TOFFOLI, StateVector, \
    apply_circuit, inner_product, new_basis_state, tensor
from cswap.utils import AUTONORMALIZE_TOLERANCE, CLAMP_TOLERANCE, \
    CapacityError, DomainError, SignatureClass, check_capacity, \
    get_max_qubits, label_to_bits, bits_to_label, popcount

__all__ = ['RegisterLayout', 'ControlDistribution', 'CswapTestResult',
           'build_entanglement_test', 'run_entanglement_test',
           'run_equivalence_test', 'check_nondestructive',
           'fredkin_decomposition', 'two_qubit_final_state']


class RegisterLayout(object):
    ''' Qubit indices of the test (a), copy (b) and control (c) registers.

    Registers are packed low to high: a = [0, n), b = [n, 2n),
    c = [2n, 3n). `a_qubits[i]`, `b_qubits[i]` and `c_qubits[i]` form the
    i-th pairing of the circuit.
    '''
    def __init__(self, n):
        self.n = n
        self.a_qubits = list(range(0, n))
        self.b_qubits = list(range(n, 2*n))
        self.c_qubits = list(range(2*n, 3*n))

    @property
    def num_qubits(self):
        return 3 * self.n

    def __repr__(self):
        return 'RegisterLayout(n=%d)' % self.n


class ControlDistribution(object):
    ''' Probability of every n-bit control outcome.

    Outcome strings follow the repo-wide order: character i belongs to the
    control qubit paired with test qubit i. Entries below 1e-12 are stored
    as exactly 0. Negative entries below -1e-12 warn, and below -1e-6
    raise :class:`cswap.utils.DomainError`.

    :param n: control register width
    :param probs: dict mapping outcome strings to probabilities. Missing
        outcomes have probability 0.
    '''
    def __init__(self, n, probs):
        self.n = n
        self.probs = {}
        for bits in sorted(probs, key=bits_to_label):
            if len(bits) != n:
                raise DomainError('Outcome %r does not have %d bits'
                                  % (bits, n))
            p = float(probs[bits])
            if p < -AUTONORMALIZE_TOLERANCE:
                raise DomainError('Negative probability %g for %r'
                                  % (p, bits))
            if p < -CLAMP_TOLERANCE:
                warnings.warn('Warning! Clamped probability %g for %r '
                              'to 0' % (p, bits))
            self.probs[bits] = 0.0 if p < CLAMP_TOLERANCE else p

    @classmethod
    def from_array(cls, n, probs):
        ''' Builds the distribution from an array indexed by label. '''
        probs = numpy.asarray(probs, dtype=numpy.float64)
        if probs.shape != (2**n,):
            raise DomainError('Expected %d probabilities, got shape %s'
                              % (2**n, probs.shape))
        return cls(n, dict((label_to_bits(label, n), p)
                           for label, p in enumerate(probs)))

    def probability(self, bits):
        return self.probs.get(bits, 0.0)

    def as_array(self):
        ''' Returns the probabilities as an array indexed by label. '''
        res = numpy.zeros(2**self.n)
        for bits, p in self.probs.items():
            res[bits_to_label(bits)] = p
        return res

    @property
    def p_zero(self):
        return self.probability('0' * self.n)

    def class_total(self, kind):
        ''' Total probability of the outcomes in a signature class.

        :param kind: one of the :class:`cswap.utils.SignatureClass` names
        '''
        return sum(p for bits, p in self.probs.items()
                   if SignatureClass.matches(kind, popcount(bits)))

    @property
    def signature_total(self):
        return self.class_total(SignatureClass.EVEN_ONES)

    def class_totals(self):
        return dict((kind, self.class_total(kind))
                    for kind in SignatureClass.KINDS)

    def total(self):
        return sum(self.probs.values())

    def support(self):
        ''' Outcomes with nonzero probability, in label order. '''
        return [bits for bits, p in self.probs.items() if p > 0]

    def __repr__(self):
        return 'ControlDistribution(n=%d, %s)' % (
            self.n, dict((b, p) for b, p in self.probs.items() if p > 0))


class CswapTestResult(object):
    def __init__(self, control_dist, final_state=None, layout=None):
        self.control_dist = control_dist
        self.final_state = final_state
        self.layout = layout


def _max_test_qubits():
    return get_max_qubits() // 3


def fredkin_decomposition(c, a, b):
    ''' Returns the CNOT, Toffoli, CNOT sequence that swaps `a` and `b`
    when `c` is 1. '''
    return [CNOT(b, a), TOFFOLI(c, a, b), CNOT(b, a)]


def build_entanglement_test(n, trailing_cnots=False):
    ''' Builds the n-qubit CSWAP entanglement test.

    The gates are a Hadamard on every control qubit, one Fredkin per
    qubit pairing, then a Hadamard on every control qubit again.

    :param n: test-state qubit count, 1 <= n <= CSWAP_MAX_QUBITS // 3
    :param trailing_cnots: boolean, defaults to False. Appends a CNOT from
        each copy qubit onto its test qubit. These only act on the test and
        copy registers, so the control distribution does not change.
    :returns: tuple (gates, layout)
    '''
    n_max = _max_test_qubits()
    if not 1 <= n <= n_max:
        raise CapacityError('Test-state width must be in [1, %d], got %d'
                            % (n_max, n))
    layout = RegisterLayout(n)
    gates = [H(c) for c in layout.c_qubits]
    gates += [FREDKIN(c, a, b) for a, b, c in
              zip(layout.a_qubits, layout.b_qubits, layout.c_qubits)]
    gates += [H(c) for c in layout.c_qubits]
    if trailing_cnots:
        gates += [CNOT(b, a) for a, b in zip(layout.a_qubits, layout.b_qubits)]
    return gates, layout


def _check_pair(a, b):
    if a.num_qubits != b.num_qubits:
        raise DomainError('Test state has %d qubits but the copy has %d'
                          % (a.num_qubits, b.num_qubits))
    for name, state in [('Test', a), ('Copy', b)]:
        if not state.is_normalized():
            raise DomainError('%s state is not normalized (norm %.12g)'
                              % (name, state.norm()))


def run_entanglement_test(a, b=None, keep_final=False, trailing_cnots=False):
    ''' Runs the CSWAP entanglement test on a test state and its copy.

    :param a: test state, :class:`cswap.engine.StateVector` on n qubits
    :param b: (optional) copy state on n qubits, defaults to `a`
    :param keep_final: boolean, defaults to False. Keeps the final 3n-qubit
        state on the result.
    :param trailing_cnots: boolean, see :func:`build_entanglement_test`
    :returns: :class:`CswapTestResult`
    '''
    if b is None:
        b = a
    _check_pair(a, b)
    n = a.num_qubits
    gates, layout = build_entanglement_test(n, trailing_cnots=trailing_cnots)
    state = tensor(tensor(a, b), new_basis_state(n, 0))
    apply_circuit(state, gates)
    # The control register holds the top n qubits
    probs = state.probabilities().reshape(2**n, -1).sum(axis=1)
    control_dist = ControlDistribution.from_array(n, probs)
    return CswapTestResult(control_dist,
                           final_state=state if keep_final else None,
                           layout=layout)


def run_equivalence_test(psi, phi):
    ''' Runs the single-control SWAP test and returns P(control = 1).

    The result is `(1 - |<psi|phi>|^2) / 2`.
    '''
    _check_pair(psi, phi)
    m = psi.num_qubits
    check_capacity(2*m + 1)
    control = 2*m
    gates = [H(control)]
    gates += [FREDKIN(control, i, m + i) for i in range(m)]
    gates += [H(control)]
    state = tensor(tensor(psi, phi), new_basis_state(1, 0))
    apply_circuit(state, gates)
    probs = state.probabilities().reshape(2, -1).sum(axis=1)
    p_one = float(probs[1])
    return 0.0 if abs(p_one) < CLAMP_TOLERANCE else p_one


def check_nondestructive(a):
    ''' Returns |<initial|final>|^2 for the test run with the copy equal
    to the test state.

    The overlap equals P(0...0), so the fidelity is 1 exactly when `a` is a
    product state.
    '''
    result = run_entanglement_test(a, a, keep_final=True)
    initial = tensor(tensor(a, a), new_basis_state(a.num_qubits, 0))
    return abs(inner_product(initial, result.final_state))**2


def two_qubit_final_state(a):
    ''' Closed form of the final 6-qubit state for a two-qubit test state
    and an equal copy.

    With `D = A00 A11 - A01 A10` (so `C2 = 2|D|`) and
    `X = |00,11> - |01,10> - |10,01> + |11,00>` over (test, copy) labels,
    the final state is `(|AA> - D/2 X)|00>_C + D/2 X |11>_C`.

    :param a: two-qubit :class:`cswap.engine.StateVector`
    :returns: :class:`cswap.engine.StateVector` in the
        :class:`RegisterLayout` order
    '''
    if a.num_qubits != 2:
        raise DomainError('Need a two-qubit state, got %d qubits'
                          % a.num_qubits)
    amps = a.amplitudes
    d = amps[0] * amps[3] - amps[1] * amps[2]
    x = numpy.zeros(16, dtype=numpy.complex128)
    # Index is test_label + 4 * copy_label
    for test, copy, sign in [(0, 3, 1), (3, 0, 1), (1, 2, -1), (2, 1, -1)]:
        x[test + 4*copy] = sign
    aa = numpy.kron(amps, amps)
    final = numpy.zeros(64, dtype=numpy.complex128)
    final[0:16] = aa - d/2 * x
    final[48:64] = d/2 * x
    return StateVector(final, copy=False)
