import os
import scipy.special
import warnings

__all__ = ['CswapError', 'DomainError', 'CapacityError', 'UndetectableError',
           'SignatureClass', 'get_max_qubits', 'check_capacity',
           'label_to_bits', 'bits_to_label', 'popcount', 'all_bitstrings']


NORM_TOLERANCE = 1e-10
GATE_TOLERANCE = 1e-12
CLAMP_TOLERANCE = 1e-12
AUTONORMALIZE_TOLERANCE = 1e-6

DEFAULT_MAX_QUBITS = 24
MAX_QUBITS_ENV = 'CSWAP_MAX_QUBITS'


class CswapError(Exception):
    pass


class DomainError(CswapError, ValueError):
    ''' Raised for inputs outside an operation's domain: bad qubit
    indices, mismatched sizes, non-normalizable amplitudes. '''
    pass


class CapacityError(CswapError):
    ''' Raised when a request needs more qubits than the dense cap. '''
    pass


class UndetectableError(CswapError):
    ''' Raised when a procedure needs a nonzero signature probability. '''
    pass


def get_max_qubits():
    ''' Returns the dense-capacity cap on the total qubit count.

    Reads the `CSWAP_MAX_QUBITS` environment variable on every call so
    that tests and the CLI can change it at runtime. Defaults to 24,
    which is 3n at n = 8.
    '''
    raw = os.environ.get(MAX_QUBITS_ENV)
    if raw is None or raw.strip() == '':
        return DEFAULT_MAX_QUBITS
    try:
        value = int(raw)
    except ValueError:
        raise DomainError('%s must be an integer, got %r'
                          % (MAX_QUBITS_ENV, raw))
    if value < 1:
        raise DomainError('%s must be positive, got %d'
                          % (MAX_QUBITS_ENV, value))
    if value > DEFAULT_MAX_QUBITS:
        # 16 bytes per amplitude: 2^28 amplitudes is already 4 GiB
        warnings.warn('Warning! Dense capacity raised to %d qubits '
                      '(%.1f GiB per state vector)'
                      % (value, 16. * 2**value / 2**30))
    return value


def check_capacity(num_qubits):
    max_qubits = get_max_qubits()
    if num_qubits > max_qubits:
        raise CapacityError('%d qubits exceeds the dense capacity of %d '
                            '(set %s to change it)'
                            % (num_qubits, max_qubits, MAX_QUBITS_ENV))


def label_to_bits(label, n):
    ''' Converts a basis label to its bitstring.

    Character `i` of the result is bit `i` of `label`, so the leftmost
    character is qubit 0. This is the repo-wide outcome-string order.
    '''
    return ''.join('1' if (label >> i) & 1 else '0' for i in range(n))


def bits_to_label(bits):
    ''' Inverse of :func:`label_to_bits`. '''
    if not bits or any(ch not in '01' for ch in bits):
        raise DomainError('Not a bitstring: %r' % (bits,))
    return sum(1 << i for i, ch in enumerate(bits) if ch == '1')


def popcount(bits):
    if isinstance(bits, str):
        return bits.count('1')
    return bin(bits).count('1')


def all_bitstrings(n):
    ''' All n-bit outcome strings, ordered by basis label. '''
    return [label_to_bits(label, n) for label in range(2**n)]


class SignatureClass(object):
    ''' Classes of control outcomes, each decided by the outcome's count
    of 1s alone.

    `EVEN_ONES` leaves out the all-zero outcome, which is never a
    signature.
    '''
    ALL_ZERO = 'all_zero'
    EVEN_ONES = 'even_ones'
    EXACTLY_ONE_ONE = 'exactly_one_one'
    EXACTLY_TWO_ONES = 'exactly_two_ones'
    ODD_ONES = 'odd_ones'

    KINDS = [ALL_ZERO, EVEN_ONES, EXACTLY_ONE_ONE, EXACTLY_TWO_ONES, ODD_ONES]

    @staticmethod
    def matches(kind, weight):
        if kind == SignatureClass.ALL_ZERO:
            return weight == 0
        if kind == SignatureClass.EVEN_ONES:
            return weight > 0 and weight % 2 == 0
        if kind == SignatureClass.EXACTLY_ONE_ONE:
            return weight == 1
        if kind == SignatureClass.EXACTLY_TWO_ONES:
            return weight == 2
        if kind == SignatureClass.ODD_ONES:
            return weight % 2 == 1
        raise DomainError('Unknown signature class %r' % (kind,))

    @staticmethod
    def count(kind, n):
        ''' Number of n-bit outcomes in the class. '''
        return int(sum(scipy.special.comb(n, k, exact=True)
                       for k in range(n + 1)
                       if SignatureClass.matches(kind, k)))
