import numpy

from cswap.utils import DomainError, NORM_TOLERANCE, check_capacity, \
    label_to_bits

__all__ = ['StateVector', 'GateOp', 'H', 'CNOT', 'TOFFOLI', 'FREDKIN',
           'new_basis_state', 'apply_gate', 'apply_fredkin', 'apply_circuit',
           'tensor', 'marginal_probabilities', 'marginal_distribution',
           'inner_product']


_SQRT_HALF = numpy.sqrt(0.5)


class StateVector(object):
    ''' Dense complex amplitudes over `num_qubits` qubits.

    Qubit `i` is bit `i` of the basis label, bit 0 being the least
    significant. Amplitudes are stored as one contiguous `complex128`
    array, 16 bytes per amplitude, so a 24-qubit state takes 256 MiB.

    Gates mutate the array in place. A state must not be shared between
    writers while a gate runs; reading a state nobody mutates is fine.

    :param amplitudes: sequence of 2^m complex numbers
    :param copy: boolean, defaults to True. If False and `amplitudes` is
        already a contiguous `complex128` array it is used as is.
    '''
    def __init__(self, amplitudes, copy=True):
        if copy:
            amplitudes = numpy.array(amplitudes, dtype=numpy.complex128,
                                     order='C')
        else:
            amplitudes = numpy.ascontiguousarray(amplitudes,
                                                 dtype=numpy.complex128)
        if amplitudes.ndim != 1:
            raise DomainError('Amplitudes must be a flat array, got shape %s'
                              % (amplitudes.shape,))
        size = amplitudes.shape[0]
        if size < 2 or size & (size - 1):
            raise DomainError('Amplitude count must be a power of two '
                              '>= 2, got %d' % size)
        num_qubits = size.bit_length() - 1
        check_capacity(num_qubits)
        self._amplitudes = amplitudes
        self._num_qubits = num_qubits

    @property
    def num_qubits(self):
        return self._num_qubits

    @property
    def amplitudes(self):
        return self._amplitudes

    def probabilities(self):
        ''' Returns |amplitude|^2 for every basis label. '''
        return numpy.abs(self._amplitudes)**2

    def norm(self):
        return numpy.sqrt(numpy.sum(self.probabilities()))

    def is_normalized(self, tolerance=NORM_TOLERANCE):
        return abs(self.norm() - 1) < tolerance

    def copy(self):
        return StateVector(self._amplitudes, copy=True)

    def tensor_view(self):
        # Axis k of the view is qubit m-1-k (C order, bit 0 last)
        return self._amplitudes.reshape((2,) * self._num_qubits)

    def __len__(self):
        return self._amplitudes.shape[0]

    def __repr__(self):
        return 'StateVector(num_qubits=%d)' % self._num_qubits


class GateOp(object):
    ''' One gate of the CSWAP circuits: H, CNOT, TOFFOLI or FREDKIN. '''
    ARITY = {
        'H': (0, 1),
        'CNOT': (1, 1),
        'TOFFOLI': (2, 1),
        'FREDKIN': (1, 2),
    }

    def __init__(self, kind, controls=(), targets=()):
        kind = kind.upper()
        if kind not in self.ARITY:
            raise DomainError('Unknown gate kind %r' % kind)
        controls = tuple(int(q) for q in controls)
        targets = tuple(int(q) for q in targets)
        if (len(controls), len(targets)) != self.ARITY[kind]:
            raise DomainError('%s takes %d control(s) and %d target(s), got '
                              '%d and %d' % ((kind,) + self.ARITY[kind] +
                                             (len(controls), len(targets))))
        qubits = controls + targets
        if len(set(qubits)) != len(qubits):
            raise DomainError('Gate indices collide: %s' % (qubits,))
        self.kind = kind
        self.controls = controls
        self.targets = targets

    @property
    def qubits(self):
        return self.controls + self.targets

    def validate(self, num_qubits):
        for q in self.qubits:
            if not 0 <= q < num_qubits:
                raise DomainError('Qubit %d out of range for a %d-qubit '
                                  'state' % (q, num_qubits))

    def __eq__(self, other):
        return isinstance(other, GateOp) and \
            (self.kind, self.controls, self.targets) == \
            (other.kind, other.controls, other.targets)

    def __hash__(self):
        return hash((self.kind, self.controls, self.targets))

    def __repr__(self):
        return 'GateOp(%r, controls=%s, targets=%s)' % (
            self.kind, self.controls, self.targets)


def H(target):
    return GateOp('H', (), (target,))


def CNOT(control, target):
    return GateOp('CNOT', (control,), (target,))


def TOFFOLI(control1, control2, target):
    return GateOp('TOFFOLI', (control1, control2), (target,))


def FREDKIN(control, target1, target2):
    return GateOp('FREDKIN', (control,), (target1, target2))


def _slab(m, fixed):
    # Slices (never integers) so the result stays a writable view even at m=1
    index = [slice(None)] * m
    for qubit, bit in fixed.items():
        index[m - 1 - qubit] = slice(bit, bit + 1)
    return tuple(index)


def _swap(view, fixed_a, fixed_b):
    m = view.ndim
    a = view[_slab(m, fixed_a)]
    b = view[_slab(m, fixed_b)]
    tmp = a.copy()
    a[...] = b
    b[...] = tmp


def _apply_h(view, q):
    m = view.ndim
    v0 = view[_slab(m, {q: 0})]
    v1 = view[_slab(m, {q: 1})]
    tmp = v0.copy()
    v0 += v1
    v0 *= _SQRT_HALF
    v1 -= tmp
    v1 *= -_SQRT_HALF


def apply_gate(state, gate):
    ''' Applies `gate` to `state` in place and returns `state`.

    Every kernel works on strided views of the amplitude tensor: H
    combines the two half-slabs of its target, the controlled gates only
    exchange slabs where every control bit is 1. No 2^m x 2^m matrix is
    ever built.
    '''
    gate.validate(state.num_qubits)
    view = state.tensor_view()
    if gate.kind == 'H':
        _apply_h(view, gate.targets[0])
    elif gate.kind in ('CNOT', 'TOFFOLI'):
        on = dict((c, 1) for c in gate.controls)
        t, = gate.targets
        _swap(view, _with(on, t, 0), _with(on, t, 1))
    elif gate.kind == 'FREDKIN':
        c, = gate.controls
        t1, t2 = gate.targets
        _swap(view, {c: 1, t1: 1, t2: 0}, {c: 1, t1: 0, t2: 1})
    return state


def _with(fixed, qubit, bit):
    result = dict(fixed)
    result[qubit] = bit
    return result


def apply_fredkin(state, control, t1, t2):
    ''' Exchanges qubits `t1` and `t2` on every basis state whose
    `control` bit is 1. '''
    return apply_gate(state, FREDKIN(control, t1, t2))


def apply_circuit(state, gates):
    for gate in gates:
        apply_gate(state, gate)
    return state


def new_basis_state(m, label):
    ''' Returns the computational basis state `|label>` on `m` qubits. '''
    if m < 1:
        raise DomainError('Need at least one qubit, got %d' % m)
    check_capacity(m)
    if not 0 <= label < 2**m:
        raise DomainError('Label %d out of range for %d qubits' % (label, m))
    amplitudes = numpy.zeros(2**m, dtype=numpy.complex128)
    amplitudes[label] = 1
    return StateVector(amplitudes, copy=False)


def tensor(a, b):
    ''' Returns the joint state with `a` on the low qubits and `b` above.

    Amplitude `j * 2^m_a + i` of the result is `a[i] * b[j]`.
    '''
    check_capacity(a.num_qubits + b.num_qubits)
    return StateVector(numpy.kron(b.amplitudes, a.amplitudes), copy=False)


def _check_qubits(state, qubits):
    qubits = [int(q) for q in qubits]
    if not qubits:
        raise DomainError('Need at least one qubit to marginalize onto')
    if len(set(qubits)) != len(qubits):
        raise DomainError('Repeated qubits in %s' % (qubits,))
    for q in qubits:
        if not 0 <= q < state.num_qubits:
            raise DomainError('Qubit %d out of range for a %d-qubit state'
                              % (q, state.num_qubits))
    return qubits


def marginal_probabilities(state, qubits):
    ''' Returns the marginal over `qubits` as an array indexed by label.

    Bit `k` of the index is the value of `qubits[k]`.
    '''
    qubits = _check_qubits(state, qubits)
    m = state.num_qubits
    probs = state.probabilities().reshape((2,) * m)
    keep = [m - 1 - q for q in qubits]
    drop = tuple(ax for ax in range(m) if ax not in keep)
    if drop:
        probs = probs.sum(axis=drop)
    remaining = sorted(keep)
    # Put qubits[-1] first so qubits[0] lands on the least significant bit
    order = [remaining.index(ax) for ax in reversed(keep)]
    return numpy.ascontiguousarray(probs.transpose(order)).reshape(-1)


def marginal_distribution(state, qubits):
    ''' Returns `{bitstring: probability}` over the selected qubits.

    Character `k` of each bitstring is the value of `qubits[k]`.
    '''
    probs = marginal_probabilities(state, qubits)
    n = len(qubits)
    return dict((label_to_bits(label, n), float(p))
                for label, p in enumerate(probs))


def inner_product(a, b):
    ''' Returns <a|b>, conjugating `a`. '''
    if a.num_qubits != b.num_qubits:
        raise DomainError('Cannot take the inner product of %d- and '
                          '%d-qubit states' % (a.num_qubits, b.num_qubits))
    return complex(numpy.vdot(a.amplitudes, b.amplitudes))
