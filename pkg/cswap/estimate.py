import json
import numpy
import progressbar

from cswap.circuit import run_entanglement_test
from cswap.engine import StateVector
from cswap.oracles import GHZ_LIKE, W_LIKE, expected_trials_any
from cswap.utils import DomainError, SignatureClass, UndetectableError, \
    bits_to_label, label_to_bits, popcount

__all__ = ['RngSpec', 'ShotCounts', 'EntanglementReport', 'MimicResolution',
           'sample', 'estimate_signature_probability', 'estimate_cn',
           'expected_trials_estimate',
           'trials_to_first_signature', 'classify', 'resolve_ghz3_w3_mimic',
           'DETECTED', 'NOT_DETECTED_IN_BUDGET', 'INDETERMINATE',
           'UNBALANCED_GHZ3', 'W3_LIKE']


DETECTED = 'detected'
NOT_DETECTED_IN_BUDGET = 'not_detected_in_budget'
INDETERMINATE = 'indeterminate'

UNBALANCED_GHZ3 = 'unbalanced_ghz3'
W3_LIKE = 'w3_like'

RNG_ALGORITHM = 'PCG64'

# Per-round |11>_C rate of W_3 under the mimic procedure: 2/3 * 1/4
W3_DETECTION_RATE = 1. / 6

_MAX_SEED = 2**64


class RngSpec(object):
    ''' Seed and stream of a PCG64 generator.

    The generator is seeded with `SeedSequence(seed, spawn_key=(stream,))`,
    so distinct streams of one seed are independent and every
    `(seed, stream)` pair replays the same draws.
    '''
    def __init__(self, seed=0, stream=0):
        seed, stream = int(seed), int(stream)
        if not 0 <= seed < _MAX_SEED:
            raise DomainError('Seed must be a 64-bit unsigned integer, got %d'
                              % seed)
        if stream < 0:
            raise DomainError('Stream must be >= 0, got %d' % stream)
        self.seed = seed
        self.stream = stream

    def generator(self):
        seq = numpy.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return numpy.random.Generator(numpy.random.PCG64(seq))

    def spawn(self, stream):
        return RngSpec(self.seed, stream)

    def to_json(self):
        return {'algorithm': RNG_ALGORITHM, 'numpy': numpy.__version__,
                'seed': self.seed, 'stream': self.stream}

    def __repr__(self):
        return 'RngSpec(seed=%d, stream=%d)' % (self.seed, self.stream)


def _rng(rng):
    if rng is None:
        return RngSpec()
    if isinstance(rng, RngSpec):
        return rng
    return RngSpec(rng)


class ShotCounts(object):
    ''' Observed control outcomes.

    :param n: control register width
    :param counts: dict mapping outcome strings to counts. Outcomes never
        observed can be left out.
    :param total_shots: (optional) must equal the sum of counts
    :param rng: (optional) :class:`RngSpec` the counts were drawn with
    '''
    def __init__(self, n, counts, total_shots=None, rng=None):
        self.n = n
        self.counts = {}
        for bits in sorted(counts, key=bits_to_label):
            if len(bits) != n:
                raise DomainError('Outcome %r does not have %d bits'
                                  % (bits, n))
            count = int(counts[bits])
            if count < 0:
                raise DomainError('Negative count %d for %r' % (count, bits))
            if count:
                self.counts[bits] = count
        observed = sum(self.counts.values())
        if total_shots is None:
            total_shots = observed
        if observed != total_shots:
            raise DomainError('Counts add up to %d, not %d'
                              % (observed, total_shots))
        self.total_shots = int(total_shots)
        self.rng = rng

    def count(self, bits):
        return self.counts.get(bits, 0)

    def class_count(self, kind):
        return sum(c for bits, c in self.counts.items()
                   if SignatureClass.matches(kind, popcount(bits)))

    def to_json(self):
        res = {'n': self.n, 'total_shots': self.total_shots,
               'counts': dict(self.counts)}
        if self.rng is not None:
            res['rng'] = self.rng.to_json()
        return res

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        rng = obj.get('rng')
        if rng is not None:
            rng = RngSpec(rng['seed'], rng.get('stream', 0))
        return cls(obj['n'], obj['counts'], obj['total_shots'], rng)

    def __repr__(self):
        return 'ShotCounts(n=%d, total_shots=%d, %r)' % (
            self.n, self.total_shots, self.counts)


def _probabilities(dist):
    probs = dist.as_array()
    total = probs.sum()
    if total <= 0:
        raise DomainError('Distribution has no mass')
    return probs / total


def sample(dist, shots, rng=None):
    ''' Draws `shots` i.i.d. control outcomes from `dist`.

    :param dist: :class:`cswap.circuit.ControlDistribution`
    :param shots: integer >= 1
    :param rng: :class:`RngSpec` or integer seed, defaults to seed 0
    :returns: :class:`ShotCounts`
    '''
    shots = int(shots)
    if shots < 1:
        raise DomainError('Need at least one shot, got %d' % shots)
    rng = _rng(rng)
    counts = rng.generator().multinomial(shots, _probabilities(dist))
    return ShotCounts(dist.n, dict(
        (label_to_bits(label, dist.n), c)
        for label, c in enumerate(counts) if c), shots, rng)


def estimate_signature_probability(counts, kind=SignatureClass.EVEN_ONES):
    ''' Fraction of shots in a signature class.

    :returns: tuple (estimate, standard error), the error being the
        binomial `sqrt(p(1 - p)/shots)`
    '''
    if counts.total_shots < 1:
        raise DomainError('Need at least one shot')
    p = counts.class_count(kind) / float(counts.total_shots)
    return p, numpy.sqrt(p * (1 - p) / counts.total_shots)


def estimate_cn(counts):
    ''' Estimates C_n = 2 sqrt(p) from the signature fraction p.

    :returns: tuple (estimate, standard error). The error is propagated to
        first order, `sigma_p / sqrt(p)`. When no signature was seen it is
        the bound `2 / sqrt(shots)`.
    '''
    p, sigma = estimate_signature_probability(counts)
    if p == 0:
        return 0., 2. / numpy.sqrt(counts.total_shots)
    return 2 * numpy.sqrt(p), sigma / numpy.sqrt(p)


def _is_signature(n):
    return numpy.array([SignatureClass.matches(SignatureClass.EVEN_ONES,
                                               popcount(label))
                        for label in range(2**n)])


def trials_to_first_signature(dist, rng=None, repetitions=1,
                              progress=False):
    ''' Counts the test runs needed to see the first signature, repeated
    `repetitions` times.

    One long categorical stream is drawn in blocks and cut after each
    signature, so repetition k starts right after repetition k - 1 ended.

    :param dist: :class:`cswap.circuit.ControlDistribution`
    :param rng: :class:`RngSpec` or integer seed
    :param repetitions: integer >= 1
    :param progress: boolean, shows a progress bar
    :returns: tuple (mean, standard error) of the trial counts
    :raises UndetectableError: the distribution has no signature mass
    '''
    repetitions = int(repetitions)
    if repetitions < 1:
        raise DomainError('Need at least one repetition, got %d'
                          % repetitions)
    p = dist.signature_total
    if p <= 0:
        raise UndetectableError('Signature probability is zero, the state '
                                'cannot be detected')
    probs = _probabilities(dist)
    signature = _is_signature(dist.n)
    gen = _rng(rng).generator()
    trials = []
    carry = 0
    if progress:
        bar = progressbar.ProgressBar(max_value=repetitions, widgets=[
                progressbar.Percentage(), ' ', progressbar.Bar(),
                ' [', progressbar.AdaptiveETA(), ']'])
    while len(trials) < repetitions:
        remaining = repetitions - len(trials)
        block = int(min(max(1024, 2 * remaining / p), 10**7))
        draws = gen.choice(len(probs), size=block, p=probs)
        hits = numpy.flatnonzero(signature[draws]) + 1
        if len(hits):
            gaps = numpy.diff(hits, prepend=0)
            gaps[0] += carry
            trials.extend(gaps[:remaining].tolist())
            carry = block - hits[-1]
        else:
            carry += block
        if progress:
            bar.update(min(len(trials), repetitions))
    if progress:
        bar.finish()
    trials = numpy.array(trials[:repetitions], dtype=numpy.float64)
    if repetitions == 1:
        return float(trials[0]), 0.
    return float(trials.mean()), \
        float(trials.std(ddof=1) / numpy.sqrt(repetitions))


class EntanglementReport(object):
    ''' Verdict drawn from observed control outcomes.

    `class_hint` is advisory: it comes from which signatures happened to
    show up.
    '''
    def __init__(self, n, total_shots, entangled, signatures_seen,
                 c_n_estimate, unequal_copies_flag, class_hint):
        self.n = n
        self.total_shots = total_shots
        self.entangled = entangled
        self.signatures_seen = signatures_seen
        self.c_n_estimate = c_n_estimate
        self.unequal_copies_flag = unequal_copies_flag
        self.class_hint = class_hint

    @property
    def detected(self):
        return self.entangled == DETECTED

    def to_json(self):
        c, sigma = self.c_n_estimate
        return {'n': self.n,
                'total_shots': self.total_shots,
                'entangled': self.entangled,
                'signatures_seen': sorted(self.signatures_seen,
                                          key=bits_to_label),
                'c_n_estimate': {'value': float(c), 'stderr': float(sigma)},
                'unequal_copies_flag': bool(self.unequal_copies_flag),
                'class_hint': self.class_hint}


def classify(counts, min_signature_shots=4):
    ''' Builds an :class:`EntanglementReport` from observed counts.

    The hint is GHZ_LIKE as soon as a signature with four or more 1s shows
    up. It is W_LIKE when the register has at least four qubits and at
    least `min_signature_shots` signature shots were seen, all with exactly
    two 1s. Otherwise it is INDETERMINATE.
    '''
    if counts.total_shots < 1:
        raise DomainError('Need at least one shot')
    even = SignatureClass.EVEN_ONES
    signatures = set(bits for bits in counts.counts
                     if SignatureClass.matches(even, popcount(bits)))
    odd = any(SignatureClass.matches(SignatureClass.ODD_ONES, popcount(bits))
              for bits in counts.counts)
    weights = set(popcount(bits) for bits in signatures)
    signature_shots = counts.class_count(even)
    if any(w >= 4 for w in weights):
        hint = GHZ_LIKE
    elif counts.n >= 4 and signature_shots >= min_signature_shots and \
            weights == set([2]):
        hint = W_LIKE
    else:
        hint = INDETERMINATE
    return EntanglementReport(
        counts.n, counts.total_shots,
        DETECTED if signatures else NOT_DETECTED_IN_BUDGET,
        signatures, estimate_cn(counts), odd, hint)


class MimicResolution(object):
    def __init__(self, verdict, confidence, detections, rounds):
        self.verdict = verdict
        self.confidence = confidence
        self.detections = detections
        self.rounds = rounds

    @property
    def detection_rate(self):
        return self.detections / float(self.rounds)

    @property
    def standard_error(self):
        p = self.detection_rate
        return numpy.sqrt(p * (1 - p) / self.rounds)

    def to_json(self):
        return {'verdict': self.verdict,
                'confidence': float(self.confidence),
                'detections': int(self.detections),
                'rounds': int(self.rounds),
                'detection_rate': float(self.detection_rate),
                'standard_error': float(self.standard_error)}


def _collapse_first_qubit(state):
    # Returns [(p_j, remaining two-qubit state)] for outcomes j of qubit 0
    amps = state.amplitudes
    res = []
    for j in (0, 1):
        rest = amps[j::2]
        p = float(numpy.sum(numpy.abs(rest)**2))
        res.append((p, StateVector(rest / numpy.sqrt(p)) if p > 0 else None))
    return res


def resolve_ghz3_w3_mimic(state, shots, rng=None, independent_collapse=False,
                          progress=False):
    ''' Tells an unbalanced GHZ_3 apart from a W_3 with the same CSWAP
    distribution.

    Each round measures qubit 0 of the test state, runs the two-qubit test
    on what is left against a copy and looks for a `|11>_C` outcome. An
    unbalanced GHZ_3 collapses to a product state, so it never gives one.

    :param state: three-qubit :class:`cswap.engine.StateVector`
    :param shots: number of rounds
    :param rng: :class:`RngSpec` or integer seed
    :param independent_collapse: boolean, defaults to False. By default the
        copy collapses to the same outcome as the test state. If True the
        copy is measured on its own.
    :param progress: boolean, shows a progress bar over the collapse pairs
    :returns: :class:`MimicResolution`. The confidence is
        `1 - (1 - rate)^shots` for the observed rate, or the chance a W_3
        would have shown a detection when none was seen.
    '''
    if state.num_qubits != 3:
        raise DomainError('Need a three-qubit state, got %d qubits'
                          % state.num_qubits)
    if not state.is_normalized():
        raise DomainError('State is not normalized (norm %.12g)'
                          % state.norm())
    shots = int(shots)
    if shots < 1:
        raise DomainError('Need at least one round, got %d' % shots)
    gen = _rng(rng).generator()
    branches = _collapse_first_qubit(state)
    p = numpy.array([b[0] for b in branches])
    if independent_collapse:
        pairs = [(i, j) for i in (0, 1) for j in (0, 1)]
        weights = numpy.array([p[i] * p[j] for i, j in pairs])
    else:
        pairs = [(0, 0), (1, 1)]
        weights = p.copy()
    rounds = gen.multinomial(shots, weights / weights.sum())
    detections = 0
    items = list(zip(pairs, rounds))
    if progress:
        items = progressbar.progressbar(items)
    for (i, j), k in items:
        if k == 0:
            continue
        dist = run_entanglement_test(branches[i][1],
                                     branches[j][1]).control_dist
        detections += int(gen.binomial(k, dist.probability('11')))
    if detections:
        verdict = W3_LIKE
        confidence = 1 - (1 - detections / float(shots))**shots
    else:
        verdict = UNBALANCED_GHZ3
        confidence = 1 - (1 - W3_DETECTION_RATE)**shots
    return MimicResolution(verdict, confidence, detections, shots)


def expected_trials_estimate(counts):
    ''' Expected runs to the first signature from the observed fraction. '''
    p, _ = estimate_signature_probability(counts)
    return expected_trials_any(p)
