import numpy
import os
import pandas
import progressbar

from cswap import oracles, states
from cswap.circuit import run_entanglement_test
from cswap.utils import DomainError, SignatureClass

__all__ = ['sweep', 'fig3', 'fig4', 'fig5', 'fig6', 'fig7', 'fig8', 'fig9',
           'write_figures', 'parse_grid', 'SWEEP_COLUMNS']


FIGURE_N_VALUES = list(range(2, 9))
GRID_POINTS = 101
CSV_FLOAT_FORMAT = '%.15g'

# Parameter axis of each error family, in radians
PARAMETER_RANGES = {
    'unbalanced_ghz': (-numpy.pi/4, numpy.pi/4),
    'unbalanced_w': (-numpy.pi/2, numpy.pi/2),
    'unequal_ghz': (-numpy.pi/4, numpy.pi/4),
    'unequal_w': (-numpy.pi/2, numpy.pi/2),
    'corrupted_ghz': (-numpy.pi/2, numpy.pi/2),
    'corrupted_w': (-numpy.pi/2, numpy.pi/2),
}

SWEEP_COLUMNS = ['family', 'n', 'parameter', 'p_zero', 'signature', 'odd',
                 'p_zero_amplitude_form', 'simulated_p_zero',
                 'simulated_signature', 'simulated_odd', 'discrepancy']


def _classes(family):
    # (signature class, unequal-copies class) tracked for each family
    if family.endswith('_w'):
        return SignatureClass.EXACTLY_TWO_ONES, SignatureClass.EXACTLY_ONE_ONE
    return SignatureClass.EVEN_ONES, SignatureClass.ODD_ONES


def parse_grid(text):
    ''' Parses `START:STOP:COUNT` into an evenly spaced list of values. '''
    try:
        start, stop, count = text.split(':')
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise DomainError('Grid must look like START:STOP:COUNT, got %r'
                          % text)
    if count < 1:
        raise DomainError('Grid needs at least one point, got %d' % count)
    return list(numpy.linspace(start, stop, count))


def default_grid(family, points=GRID_POINTS):
    if family not in PARAMETER_RANGES:
        raise DomainError('Unknown error family %r, pick one of %s'
                          % (family, ', '.join(sorted(PARAMETER_RANGES))))
    lo, hi = PARAMETER_RANGES[family]
    return list(numpy.linspace(lo, hi, points))


def _progress(items, progress, max_value):
    if not progress:
        return items
    return progressbar.progressbar(items, max_value=max_value)


def sweep(family, n_values, grid=None, include_simulation=False,
          progress=False):
    ''' One row per (n, parameter) of an error family.

    :param family: one of :data:`cswap.oracles.ERROR_FAMILIES`
    :param n_values: list of qubit counts, each >= 2
    :param grid: (optional) list of parameter values in radians. Defaults
        to 101 points over the family's usual range.
    :param include_simulation: boolean, defaults to False. Also runs the
        circuit for every row and fills the simulated columns. Left as NaN
        otherwise.
    :param progress: boolean, shows a progress bar
    :returns: pandas DataFrame with the columns of :data:`SWEEP_COLUMNS`,
        sorted by n and parameter
    '''
    if grid is None:
        grid = default_grid(family)
    grid = sorted(float(x) for x in grid)
    n_values = sorted(int(n) for n in n_values)
    if not grid or not n_values:
        raise DomainError('Sweep needs at least one n and one grid point')
    if family not in PARAMETER_RANGES:
        raise DomainError('Unknown error family %r, pick one of %s'
                          % (family, ', '.join(sorted(PARAMETER_RANGES))))
    signature_kind, odd_kind = _classes(family)
    keys = [(n, x) for n in n_values for x in grid]
    rows = []
    for n, x in _progress(keys, progress, len(keys)):
        dist = oracles.family_dist(family, n, x)
        amplitude_form = oracles.family_amplitude_dist(family, n, x)
        row = {
            'family': family, 'n': n, 'parameter': x,
            'p_zero': dist.p_zero,
            'signature': dist.class_total(signature_kind),
            'odd': dist.class_total(odd_kind),
            'p_zero_amplitude_form': numpy.nan if amplitude_form is None
            else amplitude_form.p_zero,
            'simulated_p_zero': numpy.nan,
            'simulated_signature': numpy.nan,
            'simulated_odd': numpy.nan,
            'discrepancy': numpy.nan,
        }
        if include_simulation:
            test, copy = states.error_family_pair(family, n, x)
            sim = run_entanglement_test(test, copy).control_dist
            row['simulated_p_zero'] = sim.p_zero
            row['simulated_signature'] = sim.class_total(signature_kind)
            row['simulated_odd'] = sim.class_total(odd_kind)
            row['discrepancy'] = max(
                abs(row['p_zero'] - row['simulated_p_zero']),
                abs(row['signature'] - row['simulated_signature']),
                abs(row['odd'] - row['simulated_odd']))
        rows.append(row)
    return pandas.DataFrame(rows, columns=SWEEP_COLUMNS)


def _ideal(family, n):
    if family == 'ghz':
        return oracles.ghz_maximal(n), states.build_unbalanced_ghz(n, 0.), \
            .5**n
    return oracles.w_maximal(n), states.build_unbalanced_w(n, 0.), 1. / n**2


def fig3(n_values=FIGURE_N_VALUES, include_simulation=True, progress=False):
    ''' P(0...0) and the signature total of GHZ(n) and W(n). '''
    rows = []
    keys = [(f, n) for f in ('ghz', 'w') for n in n_values]
    for family, n in _progress(keys, progress, len(keys)):
        dist, state, each = _ideal(family, n)
        row = {'family': family, 'n': n, 'p_zero': dist.p_zero,
               'signature': dist.signature_total,
               'signature_outcome': each,
               'simulated_p_zero': numpy.nan,
               'simulated_signature': numpy.nan}
        if include_simulation:
            sim = run_entanglement_test(state).control_dist
            row['simulated_p_zero'] = sim.p_zero
            row['simulated_signature'] = sim.signature_total
        rows.append(row)
    return pandas.DataFrame(rows, columns=[
        'family', 'n', 'p_zero', 'signature', 'signature_outcome',
        'simulated_p_zero', 'simulated_signature'])


def fig4(n_values=FIGURE_N_VALUES, include_simulation=True, progress=False):
    ''' Degree of entanglement C_n of GHZ(n) and W(n). '''
    rows = []
    keys = [(f, n) for f in ('ghz', 'w') for n in n_values]
    for family, n in _progress(keys, progress, len(keys)):
        dist, state, _ = _ideal(family, n)
        row = {'family': family, 'n': n, 'c_n': oracles.degree_cn(dist),
               'c_n_upper_bound': oracles.cn_upper_bound(n),
               'simulated_c_n': numpy.nan}
        if include_simulation:
            row['simulated_c_n'] = oracles.degree_cn(
                run_entanglement_test(state).control_dist)
        rows.append(row)
    return pandas.DataFrame(rows, columns=[
        'family', 'n', 'c_n', 'c_n_upper_bound', 'simulated_c_n'])


def fig5(n_values=FIGURE_N_VALUES, points=GRID_POINTS):
    ''' Expected runs to the first signature against C_n, next to the 3^n
    tomography baseline. '''
    rows = []
    for n in n_values:
        crossover = oracles.tomography_crossover(n)
        upper = oracles.cn_upper_bound(n)
        # The crossover is always on the grid so it can be read off exactly
        grid = sorted(set(numpy.linspace(upper / points, upper,
                                         points).tolist() + [crossover]))
        for c in grid:
            trials = oracles.expected_trials_from_degree(c)
            rows.append({'n': n, 'c_n': c, 'expected_trials': trials,
                         'tomography_baseline': oracles.tomography_baseline(n),
                         'crossover': crossover,
                         'advantage': bool(trials < 3**n)})
    return pandas.DataFrame(rows, columns=[
        'n', 'c_n', 'expected_trials', 'tomography_baseline', 'crossover',
        'advantage'])


def fig6(n_values=FIGURE_N_VALUES):
    ''' Expected runs for any and for genuine n-qubit entanglement. '''
    rows = []
    for family, kind in [('ghz', oracles.GHZ_LIKE), ('w', oracles.W_LIKE)]:
        for n in n_values:
            dist = _ideal(family, n)[0]
            p = dist.signature_total
            rows.append({
                'family': family, 'n': n, 'signature': p,
                'exponent': oracles.genuine_exponent(n, kind),
                'expected_trials_any': oracles.expected_trials_any(p),
                'expected_trials_genuine':
                    oracles.expected_trials_genuine(n, kind, p),
                'tomography_baseline': oracles.tomography_baseline(n)})
    return pandas.DataFrame(rows, columns=[
        'family', 'n', 'signature', 'exponent', 'expected_trials_any',
        'expected_trials_genuine', 'tomography_baseline'])


def _family_sweeps(families, n_values, points, include_simulation,
                   progress):
    return pandas.concat(
        [sweep(f, n_values, default_grid(f, points), include_simulation,
               progress) for f in families],
        ignore_index=True)


def fig7(n_values=FIGURE_N_VALUES, points=GRID_POINTS,
         include_simulation=True, progress=False):
    ''' Unbalanced GHZ and W sweeps. '''
    return _family_sweeps(['unbalanced_ghz', 'unbalanced_w'], n_values,
                          points, include_simulation, progress)


def fig8(n_values=FIGURE_N_VALUES, points=GRID_POINTS,
         include_simulation=True, progress=False):
    ''' Unequal GHZ and W sweeps. '''
    return _family_sweeps(['unequal_ghz', 'unequal_w'], n_values,
                          points, include_simulation, progress)


def fig9(n_values=FIGURE_N_VALUES, points=GRID_POINTS,
         include_simulation=True, progress=False):
    ''' Corrupted GHZ and W sweeps. '''
    return _family_sweeps(['corrupted_ghz', 'corrupted_w'], n_values,
                          points, include_simulation, progress)


def write_figures(output_dir, n_values=FIGURE_N_VALUES,
                  include_simulation=True, progress=False):
    ''' Writes fig3.csv ... fig9.csv into `output_dir`.

    Every dataset with simulated columns fills them in unless
    `include_simulation` is off.

    :returns: list of the paths written
    '''
    if not os.path.isdir(output_dir):
        os.makedirs(output_dir)
    frames = [
        ('fig3', fig3(n_values, include_simulation=include_simulation,
                      progress=progress)),
        ('fig4', fig4(n_values, include_simulation=include_simulation,
                      progress=progress)),
        ('fig5', fig5(n_values)),
        ('fig6', fig6(n_values)),
        ('fig7', fig7(n_values, include_simulation=include_simulation,
                      progress=progress)),
        ('fig8', fig8(n_values, include_simulation=include_simulation,
                      progress=progress)),
        ('fig9', fig9(n_values, include_simulation=include_simulation,
                      progress=progress)),
    ]
    paths = []
    for name, df in frames:
        path = os.path.join(output_dir, '%s.csv' % name)
        df.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
        paths.append(path)
    return paths
