import json
import numpy
import warnings

from cswap.engine import StateVector, new_basis_state
from cswap.utils import AUTONORMALIZE_TOLERANCE, NORM_TOLERANCE, \
    DomainError, bits_to_label, check_capacity

__all__ = ['StateSpec', 'PairSpec', 'build', 'build_unbalanced_ghz',
           'build_unbalanced_w', 'build_corrupted', 'error_family_pair',
           'MIMIC_DELTA']


PRODUCT_BASIS = 'product_basis'
BELL = 'bell'
GHZ = 'ghz'
W = 'w'
UNBALANCED_GHZ = 'unbalanced_ghz'
UNBALANCED_W = 'unbalanced_w'
CORRUPTED_GHZ = 'corrupted_ghz'
CORRUPTED_W = 'corrupted_w'
GENERAL = 'general'

FAMILIES = [PRODUCT_BASIS, BELL, GHZ, W, UNBALANCED_GHZ, UNBALANCED_W,
            CORRUPTED_GHZ, CORRUPTED_W, GENERAL]

BELL_VARIANTS = {
    'phi+': ((0, 1), (3, 1)),
    'phi-': ((0, 1), (3, -1)),
    'psi+': ((1, 1), (2, 1)),
    'psi-': ((1, 1), (2, -1)),
}

# Unbalanced GHZ_3 with the same control distribution as W_3. The negated
# angle works too.
MIMIC_DELTA = numpy.arcsin(numpy.sqrt(2./3)) - numpy.pi/4

_SHORT_NAMES = {
    'product': PRODUCT_BASIS,
    'basis': PRODUCT_BASIS,
}


def _check_n(n, minimum=2):
    n = int(n)
    if n < minimum:
        raise DomainError('Need n >= %d, got %d' % (minimum, n))
    return n


class StateSpec(object):
    ''' Declarative description of a test or copy state.

    Only the fields relevant to `family` are set, the others stay `None`:

    * `product_basis`: `label` (bitstring, character i is qubit i)
    * `bell`: `variant`, one of "phi+", "phi-", "psi+", "psi-"
    * `ghz`, `w`: `n`
    * `unbalanced_ghz`, `unbalanced_w`: `n`, `delta` (radians)
    * `corrupted_ghz`, `corrupted_w`: `n`, `phi` (radians)
    * `general`: `amplitudes`, a list of complex numbers indexed by label
    '''
    def __init__(self, family, n=None, delta=None, phi=None,
                 amplitudes=None, label=None, variant=None):
        family = _SHORT_NAMES.get(family.lower(), family.lower())
        if family not in FAMILIES:
            raise DomainError('Unknown state family %r' % family)
        self.family = family
        self.n = None
        self.delta = None
        self.phi = None
        self.amplitudes = None
        self.label = None
        self.variant = None
        if family == PRODUCT_BASIS:
            if label is None:
                raise DomainError('product_basis needs a label')
            bits_to_label(label)
            self.label = label
            self.n = len(label)
        elif family == BELL:
            variant = (variant or '').lower()
            if variant not in BELL_VARIANTS:
                raise DomainError('Unknown Bell variant %r, pick one of %s'
                                  % (variant, sorted(BELL_VARIANTS)))
            self.variant = variant
            self.n = 2
        elif family == GENERAL:
            if amplitudes is None:
                raise DomainError('general needs amplitudes')
            self.amplitudes = [complex(a) for a in amplitudes]
            size = len(self.amplitudes)
            if size < 2 or size & (size - 1):
                raise DomainError('Amplitude count must be a power of two '
                                  '>= 2, got %d' % size)
            self.n = size.bit_length() - 1
        else:
            if n is None:
                raise DomainError('%s needs n' % family)
            self.n = _check_n(n)
            if family in (UNBALANCED_GHZ, UNBALANCED_W):
                if delta is None:
                    raise DomainError('%s needs delta' % family)
                self.delta = float(delta)
            elif family in (CORRUPTED_GHZ, CORRUPTED_W):
                if phi is None:
                    raise DomainError('%s needs phi' % family)
                self.phi = float(phi)

    @property
    def num_qubits(self):
        return self.n

    def to_json(self):
        ''' Returns the canonical JSON-ready dict for this spec. '''
        res = {'family': self.family}
        if self.family == PRODUCT_BASIS:
            res['label'] = self.label
        elif self.family == BELL:
            res['variant'] = self.variant
        if self.family not in (PRODUCT_BASIS, BELL, GENERAL):
            res['n'] = self.n
        if self.delta is not None:
            res['delta'] = self.delta
        if self.phi is not None:
            res['phi'] = self.phi
        if self.amplitudes is not None:
            res['amplitudes'] = [[a.real, a.imag] for a in self.amplitudes]
        return res

    @classmethod
    def from_json(cls, obj):
        ''' Inverse of :meth:`to_json`. Also accepts a JSON string.

        Amplitudes may be `[re, im]` pairs or plain numbers.
        '''
        if isinstance(obj, str):
            try:
                obj = json.loads(obj)
            except ValueError as e:
                raise DomainError('Malformed state spec JSON: %s' % e)
        if not isinstance(obj, dict) or 'family' not in obj:
            raise DomainError('State spec must be an object with a "family" '
                              'field, got %r' % (obj,))
        amplitudes = obj.get('amplitudes')
        if amplitudes is not None:
            amplitudes = [_parse_amplitude(a) for a in amplitudes]
        return cls(obj['family'], n=obj.get('n'), delta=obj.get('delta'),
                   phi=obj.get('phi'), amplitudes=amplitudes,
                   label=obj.get('label'), variant=obj.get('variant'))

    @classmethod
    def parse(cls, text):
        ''' Parses the compact command-line form `family:params`.

        Examples: `bell:psi+`, `ghz:5`, `w:4`, `product:010`,
        `unbalanced_ghz:3:0.3`, `corrupted_w:4:0.2`,
        `general:[1,0,0,0]` (JSON list, complex entries as `[re, im]`).
        '''
        family, _, rest = text.strip().partition(':')
        family = _SHORT_NAMES.get(family.lower(), family.lower())
        if family == GENERAL:
            try:
                amplitudes = json.loads(rest)
            except ValueError as e:
                raise DomainError('Malformed amplitude list %r: %s'
                                  % (rest, e))
            if not isinstance(amplitudes, list):
                raise DomainError('general needs a JSON list, got %r' % rest)
            return cls(GENERAL,
                       amplitudes=[_parse_amplitude(a) for a in amplitudes])
        params = rest.split(':') if rest else []
        try:
            if family == PRODUCT_BASIS:
                label, = params
                return cls(family, label=label)
            if family == BELL:
                variant, = params
                return cls(family, variant=variant)
            if family in (GHZ, W):
                n, = params
                return cls(family, n=int(n))
            if family in (UNBALANCED_GHZ, UNBALANCED_W):
                n, delta = params
                return cls(family, n=int(n), delta=float(delta))
            if family in (CORRUPTED_GHZ, CORRUPTED_W):
                n, phi = params
                return cls(family, n=int(n), phi=float(phi))
        except DomainError:
            raise
        except ValueError:
            raise DomainError('Malformed state spec %r' % text)
        raise DomainError('Unknown state family %r' % family)

    def __eq__(self, other):
        return isinstance(other, StateSpec) and \
            self.to_json() == other.to_json()

    def __hash__(self):
        return hash(json.dumps(self.to_json(), sort_keys=True))

    def __repr__(self):
        return 'StateSpec(%s)' % ', '.join(
            '%s=%r' % kv for kv in sorted(self.to_json().items()))


def _parse_amplitude(a):
    if isinstance(a, (list, tuple)):
        if len(a) != 2:
            raise DomainError('Complex amplitudes are [re, im] pairs, got %r'
                              % (a,))
        return complex(float(a[0]), float(a[1]))
    if isinstance(a, str):
        try:
            return complex(a.replace(' ', ''))
        except ValueError:
            raise DomainError('Not a complex number: %r' % a)
    return complex(a)


class PairSpec(object):
    ''' A test state and its copy. The copy defaults to the test state. '''
    def __init__(self, test, copy=None):
        if copy is None:
            copy = test
        if test.num_qubits != copy.num_qubits:
            raise DomainError('Test state has %d qubits but the copy has %d'
                              % (test.num_qubits, copy.num_qubits))
        self.test = test
        self.copy = copy

    def build(self):
        return build(self.test), build(self.copy)

    def to_json(self):
        return {'test': self.test.to_json(), 'copy': self.copy.to_json()}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        if 'test' in obj:
            copy = obj.get('copy')
            return cls(StateSpec.from_json(obj['test']),
                       StateSpec.from_json(copy) if copy else None)
        return cls(StateSpec.from_json(obj))


def _zeros(n):
    check_capacity(n)
    return numpy.zeros(2**n, dtype=numpy.complex128)


def ghz_amplitudes(n):
    a = _zeros(n)
    a[0] = a[-1] = numpy.sqrt(0.5)
    return a


def w_amplitudes(n):
    a = _zeros(n)
    for i in range(n):
        a[1 << i] = 1. / numpy.sqrt(n)
    return a


def unbalanced_ghz_coefficients(delta):
    ''' Returns `(alpha0, alpha1)` with `alpha0 = sin(pi/4 + delta)`. '''
    return numpy.sin(numpy.pi/4 + delta), numpy.cos(numpy.pi/4 + delta)


def unbalanced_w_coefficients(n, delta):
    ''' Returns `(a1, a2)`: the amplitude on qubit 0 and the amplitude on
    each of the other n - 1 single-excitation states. '''
    n = _check_n(n)
    c2 = numpy.cos(delta)**2
    a1 = numpy.cos(delta) / numpy.sqrt(n)
    # Clipped at 0 since 1/(n-1) - c2/(n(n-1)) >= 0 only up to rounding
    a2 = numpy.sqrt(max(1. / (n - 1) - c2 / (n * (n - 1)), 0.))
    return a1, a2


def build_unbalanced_ghz(n, delta):
    ''' Returns `sin(pi/4 + delta)|0...0> + cos(pi/4 + delta)|1...1>`. '''
    n = _check_n(n)
    if delta == 0:
        return StateVector(ghz_amplitudes(n), copy=False)
    alpha0, alpha1 = unbalanced_ghz_coefficients(delta)
    a = _zeros(n)
    a[0] = alpha0
    a[-1] = alpha1
    return StateVector(a, copy=False)


def build_unbalanced_w(n, delta):
    ''' W state with the excitation on qubit 0 scaled by `cos(delta)` and
    the difference spread evenly over the other n - 1 excitations. '''
    n = _check_n(n)
    if delta == 0:
        return StateVector(w_amplitudes(n), copy=False)
    a1, a2 = unbalanced_w_coefficients(n, delta)
    a = _zeros(n)
    a[1] = a1
    for i in range(1, n):
        a[1 << i] = a2
    return StateVector(a, copy=False)


def default_extra_label(family):
    return 1 if family == GHZ else 0


def build_corrupted(family, n, phi, extra_label=None):
    ''' Returns `cos(phi)|base> + sin(phi)|extra>`.

    :param family: "ghz" or "w", the maximally entangled base state
    :param n: qubit count, at least 2
    :param phi: corruption angle in radians
    :param extra_label: (optional) basis label of the added state. Defaults
        to qubit 0 excited (label 1) for GHZ and to `|0...0>` for W. It must
        lie outside the support of the base state.
    '''
    family = family.lower()
    if family in (CORRUPTED_GHZ, CORRUPTED_W):
        family = family.split('_')[1]
    if family not in (GHZ, W):
        raise DomainError('Corruption is defined for ghz and w, got %r'
                          % family)
    n = _check_n(n)
    base = ghz_amplitudes(n) if family == GHZ else w_amplitudes(n)
    if extra_label is None:
        extra_label = default_extra_label(family)
    if not 0 <= extra_label < 2**n:
        raise DomainError('Label %d out of range for %d qubits'
                          % (extra_label, n))
    if base[extra_label] != 0:
        raise DomainError('Extra state %d overlaps the %s base state'
                          % (extra_label, family))
    if phi == 0:
        return StateVector(base, copy=False)
    a = numpy.cos(phi) * base
    a[extra_label] = numpy.sin(phi)
    return StateVector(a, copy=False)


def _build_general(amplitudes):
    a = numpy.array(amplitudes, dtype=numpy.complex128)
    norm = numpy.sqrt(numpy.sum(numpy.abs(a)**2))
    if norm == 0:
        raise DomainError('All-zero amplitudes cannot be normalized')
    deviation = abs(norm - 1)
    if deviation >= AUTONORMALIZE_TOLERANCE:
        raise DomainError('Amplitudes have norm %.9g, more than %g away '
                          'from 1' % (norm, AUTONORMALIZE_TOLERANCE))
    if deviation >= NORM_TOLERANCE:
        warnings.warn('Warning! Normalized general amplitudes with '
                      'norm %.12g' % norm)
    return StateVector(a / norm, copy=False)


def build(spec):
    ''' Builds the normalized state described by `spec`.

    :param spec: :class:`StateSpec`
    :returns: :class:`cswap.engine.StateVector`
    '''
    family = spec.family
    if family == PRODUCT_BASIS:
        return new_basis_state(spec.n, bits_to_label(spec.label))
    if family == BELL:
        a = numpy.zeros(4, dtype=numpy.complex128)
        for label, sign in BELL_VARIANTS[spec.variant]:
            a[label] = sign * numpy.sqrt(0.5)
        return StateVector(a, copy=False)
    if family == GHZ:
        return StateVector(ghz_amplitudes(spec.n), copy=False)
    if family == W:
        return StateVector(w_amplitudes(spec.n), copy=False)
    if family == UNBALANCED_GHZ:
        return build_unbalanced_ghz(spec.n, spec.delta)
    if family == UNBALANCED_W:
        return build_unbalanced_w(spec.n, spec.delta)
    if family == CORRUPTED_GHZ:
        return build_corrupted(GHZ, spec.n, spec.phi)
    if family == CORRUPTED_W:
        return build_corrupted(W, spec.n, spec.phi)
    return _build_general(spec.amplitudes)


def error_family_pair(family, n, x):
    ''' Test and copy states of an error family at parameter `x`.

    The unequal families pair the maximally entangled state with the
    unbalanced copy. The others use the perturbed state for both.

    :returns: tuple (test, copy) of :class:`cswap.engine.StateVector`
    '''
    if family == 'unbalanced_ghz':
        a = build_unbalanced_ghz(n, x)
        return a, a
    if family == 'unbalanced_w':
        a = build_unbalanced_w(n, x)
        return a, a
    if family == 'unequal_ghz':
        return build_unbalanced_ghz(n, 0.), build_unbalanced_ghz(n, x)
    if family == 'unequal_w':
        return build_unbalanced_w(n, 0.), build_unbalanced_w(n, x)
    if family == 'corrupted_ghz':
        a = build_corrupted(GHZ, n, x)
        return a, a
    if family == 'corrupted_w':
        a = build_corrupted(W, n, x)
        return a, a
    raise DomainError('Unknown error family %r' % family)
