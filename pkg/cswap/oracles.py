import numpy
import scipy.special

from cswap import states
from cswap.circuit import run_entanglement_test
from cswap.engine import StateVector
from cswap.utils import NORM_TOLERANCE, DomainError, SignatureClass, \
    label_to_bits, popcount

__all__ = ['SignatureClass', 'AnalyticDistribution', 'concurrence2',
           'two_qubit_distribution', 'three_qubit_equal_distribution',
           'ghz_maximal', 'w_maximal', 'degree_cn', 'unbalanced_ghz_dist',
           'general_unbalanced_ghz_dist', 'unbalanced_w_dist',
           'general_unbalanced_w_dist', 'unequal_ghz_dist',
           'unequal_ghz_delta_dist', 'unequal_w_dist', 'unequal_w_delta_dist',
           'corrupted_ghz_dist', 'corrupted_w_dist', 'expected_trials_any',
           'expected_trials_from_degree', 'expected_trials_genuine',
           'genuine_exponent', 'tomography_baseline', 'tomography_crossover',
           'tomography_advantage_range', 'cn_upper_bound',
           'leading_order_errors', 'family_dist', 'family_amplitude_dist',
           'ERROR_FAMILIES', 'locc_monotonicity_check', 'LoccRecord',
           'UNDETECTABLE', 'GHZ_LIKE', 'W_LIKE']


UNDETECTABLE = 'undetectable'
GHZ_LIKE = 'ghz_like'
W_LIKE = 'w_like'

# Above this width per-outcome maps get too large to be worth building
PER_OUTCOME_MAX_N = 12

_ALL_ZERO = SignatureClass.ALL_ZERO
_EVEN = SignatureClass.EVEN_ONES
_ODD = SignatureClass.ODD_ONES
_ONE = SignatureClass.EXACTLY_ONE_ONE
_TWO = SignatureClass.EXACTLY_TWO_ONES


class AnalyticDistribution(object):
    ''' Closed-form control distribution.

    :param n: control register width
    :param p_zero: probability of the all-zero outcome
    :param signature_classes: dict mapping :class:`SignatureClass` names to
        class totals
    :param per_outcome: (optional) dict mapping outcome strings to
        probabilities. Outcomes left out have probability 0.
    '''
    def __init__(self, n, p_zero, signature_classes, per_outcome=None):
        self.n = n
        self.p_zero = float(p_zero)
        self.signature_classes = dict(
            (k, float(v)) for k, v in signature_classes.items())
        self.per_outcome = per_outcome

    def class_total(self, kind):
        if kind == _ALL_ZERO:
            return self.p_zero
        if kind in self.signature_classes:
            return self.signature_classes[kind]
        if self.per_outcome is not None:
            return sum(p for bits, p in self.per_outcome.items()
                       if SignatureClass.matches(kind, popcount(bits)))
        raise DomainError('No closed form for class %r here' % kind)

    @property
    def signature_total(self):
        return self.class_total(_EVEN)

    def probability(self, bits):
        if self.per_outcome is None:
            raise DomainError('No per-outcome closed form here')
        return self.per_outcome.get(bits, 0.0)

    def total(self):
        return self.p_zero + self.class_total(_EVEN) + self.class_total(_ODD)

    def __repr__(self):
        return 'AnalyticDistribution(n=%d, p_zero=%r, %r)' % (
            self.n, self.p_zero, self.signature_classes)


def _from_outcomes(n, per_outcome):
    classes = {}
    for kind in SignatureClass.KINDS:
        if kind != _ALL_ZERO:
            classes[kind] = sum(p for bits, p in per_outcome.items()
                                if SignatureClass.matches(kind,
                                                          popcount(bits)))
    return AnalyticDistribution(n, per_outcome.get('0' * n, 0.0), classes,
                                per_outcome)


def _ghz_like(n, p_zero, even, odd, uniform=True):
    # GHZ-like states only reach the all-zero, the even and the odd classes.
    # Within a class the outcomes are equally likely unless `uniform` is off
    classes = {_EVEN: even, _ODD: odd}
    per_outcome = None
    if uniform:
        n_even = 2**(n - 1) - 1
        n_odd = 2**(n - 1)
        classes[_TWO] = even * scipy.special.comb(n, 2, exact=True) / n_even
        classes[_ONE] = odd * n / n_odd
        if n <= PER_OUTCOME_MAX_N:
            per_outcome = {}
            for label in range(2**n):
                bits = label_to_bits(label, n)
                weight = popcount(bits)
                if weight == 0:
                    per_outcome[bits] = p_zero
                elif weight % 2 == 0:
                    per_outcome[bits] = even / n_even
                else:
                    per_outcome[bits] = odd / n_odd
    return AnalyticDistribution(n, p_zero, classes, per_outcome)


def _w_like(n, p_zero, one, two, per_outcome=None):
    return AnalyticDistribution(n, p_zero, {_ONE: one, _TWO: two,
                                            _EVEN: two, _ODD: one},
                                per_outcome)


def _check_n(n):
    n = int(n)
    if n < 2:
        raise DomainError('Need n >= 2, got %d' % n)
    return n


def _check_normalized(amps, what):
    norm2 = sum(abs(x)**2 for x in amps)
    if abs(numpy.sqrt(norm2) - 1) >= NORM_TOLERANCE:
        raise DomainError('%s is not normalized (norm %.12g)'
                          % (what, numpy.sqrt(norm2)))


def _amplitudes(state):
    if isinstance(state, StateVector):
        return state.amplitudes
    return numpy.asarray(state, dtype=numpy.complex128)


def concurrence2(amps):
    ''' Two-qubit concurrence `2|A00 A11 - A01 A10|`.

    :param amps: 4 amplitudes indexed by label, or a two-qubit
        :class:`cswap.engine.StateVector`
    '''
    amps = _amplitudes(amps)
    if amps.shape != (4,):
        raise DomainError('Need 4 amplitudes, got shape %s' % (amps.shape,))
    return 2 * abs(amps[0] * amps[3] - amps[1] * amps[2])


def _msb_indexer(amps):
    # Qubit 0 is the last character here, so 'xyz' is label int('xyz', 2)
    return lambda s: amps[int(s, 2)]


def _sq(x):
    return abs(x)**2


def two_qubit_distribution(a, b=None):
    ''' Control distribution for general two-qubit test and copy states.

    Every squared bracket is a modulus square, so complex amplitudes work.
    For `a == b` this reduces to `{00: 1 - C2^2/4, 11: C2^2/4}`.

    :param a: test state, 4 amplitudes or a :class:`StateVector`
    :param b: (optional) copy state, defaults to `a`
    '''
    a = _amplitudes(a)
    b = a if b is None else _amplitudes(b)
    if a.shape != (4,) or b.shape != (4,):
        raise DomainError('Need 4 amplitudes per state')
    A = _msb_indexer(a)
    B = _msb_indexer(b)
    p00 = .25 * (
        4 * (_sq(A('00') * B('00')) + _sq(A('01') * B('01')) +
             _sq(A('10') * B('10')) + _sq(A('11') * B('11'))) +
        2 * _sq(A('00') * B('01') + A('01') * B('00')) +
        2 * _sq(A('00') * B('10') + A('10') * B('00')) +
        2 * _sq(A('01') * B('11') + A('11') * B('01')) +
        2 * _sq(A('10') * B('11') + A('11') * B('10')) +
        _sq(A('00') * B('11') + A('01') * B('10') +
            A('10') * B('01') + A('11') * B('00')))
    p01 = .25 * (
        2 * _sq(A('00') * B('01') - A('01') * B('00')) +
        2 * _sq(A('10') * B('11') - A('11') * B('10')) +
        _sq(A('00') * B('11') - A('01') * B('10') +
            A('10') * B('01') - A('11') * B('00')))
    p10 = .25 * (
        2 * _sq(A('00') * B('10') - A('10') * B('00')) +
        2 * _sq(A('01') * B('11') - A('11') * B('01')) +
        _sq(A('00') * B('11') + A('01') * B('10') -
            A('10') * B('01') - A('11') * B('00')))
    p11 = .25 * _sq(A('00') * B('11') - A('01') * B('10') -
                    A('10') * B('01') + A('11') * B('00'))
    # Re-keyed so that character i is qubit i
    return _from_outcomes(2, {'00': p00, '10': p01, '01': p10, '11': p11})


def three_qubit_equal_distribution(a):
    ''' Control distribution for a general three-qubit test state with an
    equal copy. The outcomes 001, 010, 100 and 111 are exactly zero. '''
    a = _amplitudes(a)
    if a.shape != (8,):
        raise DomainError('Need 8 amplitudes, got shape %s' % (a.shape,))
    A = _msb_indexer(a)
    p000 = .5 * (
        2 * sum(abs(x)**4 for x in a) +
        4 * _sq(A('000')) * (_sq(A('001')) + _sq(A('010')) + _sq(A('100'))) +
        4 * _sq(A('011')) * (_sq(A('001')) + _sq(A('010')) + _sq(A('111'))) +
        4 * _sq(A('101')) * (_sq(A('001')) + _sq(A('100')) + _sq(A('111'))) +
        4 * _sq(A('110')) * (_sq(A('010')) + _sq(A('100')) + _sq(A('111'))) +
        2 * _sq(A('000') * A('011') + A('001') * A('010')) +
        2 * _sq(A('000') * A('101') + A('001') * A('100')) +
        2 * _sq(A('000') * A('110') + A('010') * A('100')) +
        2 * _sq(A('001') * A('111') + A('011') * A('101')) +
        2 * _sq(A('010') * A('111') + A('011') * A('110')) +
        2 * _sq(A('100') * A('111') + A('101') * A('110')) +
        _sq(A('000') * A('111') + A('001') * A('110') +
            A('010') * A('101') + A('011') * A('100')))
    p011 = .5 * (
        2 * _sq(A('000') * A('011') - A('001') * A('010')) +
        2 * _sq(A('100') * A('111') - A('101') * A('110')) +
        _sq(A('000') * A('111') - A('001') * A('110') -
            A('010') * A('101') + A('011') * A('100')))
    p101 = .5 * (
        2 * _sq(A('000') * A('101') - A('001') * A('100')) +
        2 * _sq(A('010') * A('111') - A('011') * A('110')) +
        _sq(A('000') * A('111') - A('001') * A('110') +
            A('010') * A('101') - A('011') * A('100')))
    p110 = .5 * (
        2 * _sq(A('000') * A('110') - A('010') * A('100')) +
        2 * _sq(A('001') * A('111') - A('011') * A('101')) +
        _sq(A('000') * A('111') + A('001') * A('110') -
            A('010') * A('101') - A('011') * A('100')))
    written = {'000': p000, '001': 0., '010': 0., '011': p011,
               '100': 0., '101': p101, '110': p110, '111': 0.}
    return _from_outcomes(3, dict((s[::-1], p) for s, p in written.items()))


def ghz_maximal(n):
    ''' Control distribution for GHZ(n) against an equal copy: every
    nonzero even outcome has probability 1/2^n. '''
    n = _check_n(n)
    return _ghz_like(n, .5 + .5**n, .5 - .5**n, 0.)


def w_maximal(n):
    ''' Control distribution for W(n) against an equal copy: every
    two-ones outcome has probability 1/n^2. '''
    n = _check_n(n)
    per_outcome = None
    if n <= PER_OUTCOME_MAX_N:
        per_outcome = {'0' * n: .5 + .5/n}
        for i in range(n):
            for j in range(i + 1, n):
                per_outcome[label_to_bits((1 << i) | (1 << j), n)] = 1./n**2
    return _w_like(n, .5 + .5/n, 0., .5 - .5/n, per_outcome)


def degree_cn(dist):
    ''' Degree of entanglement `2 sqrt(P(nonzero even number of 1s))`.

    :param dist: :class:`cswap.circuit.ControlDistribution` or
        :class:`AnalyticDistribution`
    '''
    return 2 * numpy.sqrt(max(dist.class_total(_EVEN), 0.))


def cn_upper_bound(n):
    ''' Largest C_n, reached by GHZ(n). Tends to sqrt(2). '''
    n = _check_n(n)
    return 2 * numpy.sqrt(.5 - .5**n)


def unbalanced_ghz_dist(n, delta):
    ''' Test and copy both `sin(pi/4 + delta)|0..0> + cos(pi/4 + delta)|1..1>`.
    '''
    n = _check_n(n)
    err = (2 - 4 * .5**n) * numpy.cos(delta)**2 * numpy.sin(delta)**2
    return _ghz_like(n, (.5 + .5**n) + err, (.5 - .5**n) - err, 0.)


def general_unbalanced_ghz_dist(n, alpha0, alpha1):
    ''' Test and copy both `alpha0 |0..0> + alpha1 |1..1>`. '''
    n = _check_n(n)
    _check_normalized([alpha0, alpha1], 'GHZ-like state')
    even = (2.**(n - 1) - 1) / 2.**(n - 2) * _sq(alpha0) * _sq(alpha1)
    return _ghz_like(n, 1 - even, even, 0.)


def unbalanced_w_dist(n, delta):
    ''' Test and copy both the unbalanced W state of
    :func:`cswap.states.build_unbalanced_w`.

    The deviation from W(n) is `sin(delta)^4 / (2n(n-1))`, quartic in delta.
    '''
    n = _check_n(n)
    err = numpy.sin(delta)**4 / (2. * n * (n - 1))
    return _w_like(n, (.5 + .5/n) + err, 0., (.5 - .5/n) - err)


def general_unbalanced_w_dist(n, a1, a2):
    ''' Test and copy both `a1 |qubit 0 excited> + a2 sum_{j>0} |qubit j
    excited>`. '''
    n = _check_n(n)
    _check_normalized([a1] + [a2] * (n - 1), 'W-like state')
    two = (n - 1) * _sq(a2) * (_sq(a1) + (n - 2) * _sq(a2) / 2.)
    return _w_like(n, 1 - two, 0., two)


def unequal_ghz_dist(n, alpha0, alpha1, beta0, beta1):
    ''' Test `alpha0|0..0> + alpha1|1..1>` against copy
    `beta0|0..0> + beta1|1..1>`.

    :raises DomainError: either pair is not normalized
    '''
    n = _check_n(n)
    _check_normalized([alpha0, alpha1], 'Test state')
    _check_normalized([beta0, beta1], 'Copy state')
    q = _sq(alpha0 * beta0) + _sq(alpha1 * beta1)
    x = _sq(alpha0 * beta1 + alpha1 * beta0)
    overlap = _sq(numpy.conj(alpha0) * beta0 + numpy.conj(alpha1) * beta1)
    return _ghz_like(n, q + x / 2.**n, (2.**(n - 1) - 1) / 2.**n * x,
                     .5 * (1 - overlap))


def unequal_ghz_delta_dist(n, delta):
    ''' GHZ(n) against the unbalanced GHZ copy at angle `delta`. '''
    n = _check_n(n)
    s2 = numpy.sin(delta)**2
    return _ghz_like(n, (.5 + .5**n) - .5**n * s2,
                     (.5 - .5**n) - (.5 - .5**n) * s2, .5 * s2)


def unequal_w_dist(n, a, b):
    ''' Test `sum_i a_i |e_i>` against copy `sum_i b_i |e_i>`, where `e_i`
    has only qubit i excited.

    Per-outcome values: `P(e_i) = 1/4 sum_{j != i} |a_i b_j - a_j b_i|^2`
    and `P(e_i + e_j) = 1/4 |a_i b_j + a_j b_i|^2`.
    '''
    n = _check_n(n)
    a = numpy.asarray(a, dtype=numpy.complex128)
    b = numpy.asarray(b, dtype=numpy.complex128)
    if a.shape != (n,) or b.shape != (n,):
        raise DomainError('Need %d single-excitation amplitudes per state' % n)
    _check_normalized(a, 'Test state')
    _check_normalized(b, 'Copy state')
    plus = numpy.abs(numpy.outer(a, b) + numpy.outer(b, a))**2
    minus = numpy.abs(numpy.outer(a, b) - numpy.outer(b, a))**2
    numpy.fill_diagonal(plus, 0)
    numpy.fill_diagonal(minus, 0)
    p_zero = numpy.sum(numpy.abs(a * b)**2) + plus.sum() / 8
    per_outcome = {'0' * n: p_zero}
    for i in range(n):
        per_outcome[label_to_bits(1 << i, n)] = minus[i].sum() / 4
        for j in range(i + 1, n):
            per_outcome[label_to_bits((1 << i) | (1 << j), n)] = \
                plus[i, j] / 4
    return _w_like(n, p_zero, minus.sum() / 4, plus.sum() / 8, per_outcome)


def unequal_w_delta_dist(n, delta):
    ''' W(n) against the unbalanced W copy at angle `delta`. '''
    n = _check_n(n)
    bracket = (numpy.sqrt(1 + numpy.sin(delta)**2 / (n - 1)) -
               numpy.cos(delta))**2
    shift = (n - 1) / (4. * n**2) * bracket
    return _w_like(n, (.5 + .5/n) - shift, 2 * shift, (.5 - .5/n) - shift)


def corrupted_ghz_dist(n, phi):
    ''' Test and copy both `cos(phi) GHZ(n) + sin(phi) |qubit 0 excited>`.

    Only class totals have a closed form: the even outcomes are not
    equally likely.
    '''
    n = _check_n(n)
    s2 = numpy.sin(phi)**2
    err = s2 * .5**n * (2 + (2**(n - 1) - 3) * s2)
    return _ghz_like(n, (.5 + .5**n) + err, (.5 - .5**n) - err, 0.,
                     uniform=False)


def corrupted_w_dist(n, phi):
    ''' Test and copy both `cos(phi) W(n) + sin(phi) |0..0>`. '''
    n = _check_n(n)
    s2 = numpy.sin(phi)**2
    err = (n - 1) / (2. * n) * s2 * (2 - s2)
    return _w_like(n, (.5 + .5/n) + err, 0., (.5 - .5/n) - err)


_LEADING_ORDER = {
    'unbalanced_ghz': lambda n: {_ALL_ZERO: (2 - 4 * .5**n, 2),
                                 _EVEN: (2 - 4 * .5**n, 2)},
    'unbalanced_w': lambda n: {_ALL_ZERO: (1. / (2 * n * (n - 1)), 4),
                               _TWO: (1. / (2 * n * (n - 1)), 4)},
    'unequal_ghz': lambda n: {_ALL_ZERO: (.5**n, 2),
                              _ODD: (.5, 2),
                              _EVEN: (.5 - .5**n, 2)},
    'unequal_w': lambda n: {_ALL_ZERO: (1. / (16 * (n - 1)), 4),
                            _ONE: (1. / (8 * (n - 1)), 4),
                            _TWO: (1. / (16 * (n - 1)), 4)},
    'corrupted_ghz': lambda n: {_ALL_ZERO: (2 * .5**n, 2),
                                _EVEN: (2 * .5**n, 2)},
    'corrupted_w': lambda n: {_ALL_ZERO: (1 - 1./n, 2),
                              _TWO: (1 - 1./n, 2)},
}

ERROR_FAMILIES = sorted(_LEADING_ORDER)


def leading_order_errors(family, n):
    ''' Small-parameter behaviour of each class total for an error family.

    :param family: one of :data:`ERROR_FAMILIES`
    :param n: qubit count
    :returns: dict mapping class names to `(coefficient, order)`, meaning
        `|P(x) - P(0)| = coefficient * x^order + higher orders`
    '''
    if family not in _LEADING_ORDER:
        raise DomainError('Unknown error family %r' % family)
    return _LEADING_ORDER[family](_check_n(n))


def family_dist(family, n, x):
    ''' Closed-form distribution of an error family at parameter `x`. '''
    functions = {
        'unbalanced_ghz': unbalanced_ghz_dist,
        'unbalanced_w': unbalanced_w_dist,
        'unequal_ghz': unequal_ghz_delta_dist,
        'unequal_w': unequal_w_delta_dist,
        'corrupted_ghz': corrupted_ghz_dist,
        'corrupted_w': corrupted_w_dist,
    }
    if family not in functions:
        raise DomainError('Unknown error family %r, pick one of %s'
                          % (family, ', '.join(ERROR_FAMILIES)))
    return functions[family](n, x)


def family_amplitude_dist(family, n, x):
    ''' Amplitude-form distribution of an error family at parameter `x`,
    or None for the corrupted families, which only have one form. '''
    n = _check_n(n)
    if family == 'unbalanced_ghz':
        return general_unbalanced_ghz_dist(
            n, *states.unbalanced_ghz_coefficients(x))
    if family == 'unbalanced_w':
        return general_unbalanced_w_dist(
            n, *states.unbalanced_w_coefficients(n, x))
    if family == 'unequal_ghz':
        alpha = numpy.sqrt(.5)
        return unequal_ghz_dist(n, alpha, alpha,
                                *states.unbalanced_ghz_coefficients(x))
    if family == 'unequal_w':
        a1, a2 = states.unbalanced_w_coefficients(n, x)
        return unequal_w_dist(n, [numpy.sqrt(1. / n)] * n,
                              [a1] + [a2] * (n - 1))
    if family in ('corrupted_ghz', 'corrupted_w'):
        return None
    raise DomainError('Unknown error family %r' % family)


def _check_probability(p_signature):
    p = float(p_signature)
    if not 0 <= p <= 1 + NORM_TOLERANCE:
        raise DomainError('Not a probability: %r' % p_signature)
    return p


def expected_trials_any(p_signature):
    ''' Expected number of test runs until the first signature, `1/p`.

    Returns :data:`UNDETECTABLE` when `p_signature` is 0.
    '''
    p = _check_probability(p_signature)
    if p == 0:
        return UNDETECTABLE
    return 1. / min(p, 1.)


def expected_trials_from_degree(c_n):
    ''' Same as :func:`expected_trials_any`, written as `4 / C_n^2`. '''
    if c_n < 0:
        raise DomainError('Degree of entanglement must be >= 0, got %r' % c_n)
    if c_n == 0:
        return UNDETECTABLE
    return 4. / c_n**2


def genuine_exponent(n, kind):
    ''' Exponent x(n): `2^(n-2)` for GHZ-like states and
    `(n-1)(n-2)/2 + 1` for W-like states. '''
    n = _check_n(n)
    if kind == GHZ_LIKE:
        return 2**(n - 2)
    if kind == W_LIKE:
        return (n - 1) * (n - 2) // 2 + 1
    raise DomainError('Unknown entanglement class %r' % (kind,))


def expected_trials_genuine(n, kind, p_signature):
    ''' Expected runs to evidence genuine n-qubit entanglement,
    `(1/p)^x(n)`. '''
    x = genuine_exponent(n, kind)
    trials = expected_trials_any(p_signature)
    if trials == UNDETECTABLE:
        return UNDETECTABLE
    return trials**x


def tomography_baseline(n):
    if int(n) < 1:
        raise DomainError('Need n >= 1, got %r' % n)
    return 3**int(n)


def tomography_crossover(n):
    ''' The C_n below which the expected run count exceeds 3^n. '''
    return numpy.sqrt(4. / tomography_baseline(n))


def tomography_advantage_range(n):
    ''' Returns `(low, high)`: C_n in `(low, high]` beats tomography. '''
    return tomography_crossover(n), cn_upper_bound(n)


class LoccRecord(object):
    ''' Result of :func:`locc_monotonicity_check`.

    `probabilities[j]` and `concurrences[j]` belong to the outcome j of the
    measured qubit.
    '''
    def __init__(self, c3, probabilities, concurrences, tolerance):
        self.c3 = c3
        self.probabilities = probabilities
        self.concurrences = concurrences
        self.expected_post_c2 = float(sum(
            p * c for p, c in zip(probabilities, concurrences)))
        self.inequality_holds_as_written = \
            c3 <= self.expected_post_c2 + tolerance
        self.inequality_holds_reversed = \
            c3 >= self.expected_post_c2 - tolerance

    def to_json(self):
        return {'c3': self.c3,
                'probabilities': list(self.probabilities),
                'concurrences': list(self.concurrences),
                'expected_post_c2': self.expected_post_c2,
                'inequality_holds_as_written':
                    bool(self.inequality_holds_as_written),
                'inequality_holds_reversed':
                    bool(self.inequality_holds_reversed)}


def locc_monotonicity_check(a, measured_qubit, tolerance=1e-10):
    ''' Compares C_3 with the average concurrence left after measuring one
    qubit in the computational basis.

    Reports both inequality directions, `C_3 <= sum_j p_j C_2(psi_j)` as
    written and its reverse.

    :param a: three-qubit :class:`cswap.engine.StateVector`
    :param measured_qubit: 0, 1 or 2
    '''
    if a.num_qubits != 3:
        raise DomainError('Need a three-qubit state, got %d qubits'
                          % a.num_qubits)
    if measured_qubit not in (0, 1, 2):
        raise DomainError('Qubit %r out of range for 3 qubits'
                          % (measured_qubit,))
    c3 = degree_cn(run_entanglement_test(a, a).control_dist)
    view = a.tensor_view()
    axis = 2 - measured_qubit
    probabilities, concurrences = [], []
    for j in (0, 1):
        rest = numpy.take(view, j, axis=axis)
        # Remaining axes keep C order, so the lower qubit stays bit 0
        rest = rest.reshape(-1)
        p = float(numpy.sum(numpy.abs(rest)**2))
        probabilities.append(p)
        if p > 0:
            concurrences.append(float(concurrence2(rest / numpy.sqrt(p))))
        else:
            concurrences.append(0.)
    return LoccRecord(float(c3), probabilities, concurrences, tolerance)
