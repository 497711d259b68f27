"""
Correlation estimator tests
"""

import math
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase, override_settings

from correlation.observables import dimer_start, get_observable, indicator, spin
from correlation.services import (
    autocorrelation, birkhoff_average, shift_discrepancy, tm_autocorrelation_oracle,
)
from correlation.types import CorrelationError, ObservableSpec
from sequences.generators import BINARY
from sequences.systems import generate
from sequences.types import Alphabet, SequenceWindow


def brute_force_correlation(x, n):
    N = len(x)
    return sum(x[i] * x[i + n] for i in range(N - n)) / (N - n)


class ThueMorseOracleTest(SimpleTestCase):
    """Test the exact Thue-Morse correlation recursion"""

    def test_first_values(self):
        """g(0) = 1, g(1) = -1/3, g(3) = 1/3"""
        self.assertEqual(tm_autocorrelation_oracle(0), 1)
        self.assertEqual(tm_autocorrelation_oracle(1), Fraction(-1, 3))
        self.assertEqual(tm_autocorrelation_oracle(2), Fraction(-1, 3))
        self.assertEqual(tm_autocorrelation_oracle(3), Fraction(1, 3))
        self.assertEqual(tm_autocorrelation_oracle(-3), Fraction(1, 3))

    def test_oracle_against_brute_force(self):
        """The recursion agrees with brute force on a 2^12 window"""
        x = generate('thue-morse', 1 << 12).spins().tolist()
        for n in range(0, 17):
            self.assertLess(abs(brute_force_correlation(x, n) - float(tm_autocorrelation_oracle(n))), 0.02)

    def test_thue_morse_window(self):
        """gamma_N(n) tracks the oracle to 1e-3 for n <= 64 at N = 2^20"""
        gamma = autocorrelation(generate('thue-morse', 1 << 20), 64)
        for n in range(65):
            self.assertLessEqual(abs(gamma.value(n) - float(tm_autocorrelation_oracle(n))), 1e-3, n)


class AutocorrelationTest(SimpleTestCase):
    """Test autocorrelation estimates and their guards"""

    def test_lag_zero_and_bound(self):
        """gamma(0) = 1 for spin sequences and |gamma(n)| <= gamma(0)"""
        gamma = autocorrelation(generate('fibonacci', 5000), 100)
        self.assertAlmostEqual(gamma.value(0), 1.0, places=12)
        self.assertTrue(np.all(np.abs(gamma.values) <= gamma.values[0] + 1e-12))

    def test_matches_brute_force(self):
        """Estimator matches a plain double loop"""
        window = generate('paperfolding', 500)
        x = window.spins().tolist()
        gamma = autocorrelation(window, 20)
        for n in range(21):
            self.assertAlmostEqual(gamma.value(n), brute_force_correlation(x, n), places=12)

    def test_fft_matches_direct(self):
        """FFT and direct summation agree to 1e-10"""
        window = generate('rudin-shapiro', 50000)
        direct = autocorrelation(window, 2000, method='direct')
        fft = autocorrelation(window, 2000, method='fft')
        self.assertEqual(direct.method, 'direct')
        self.assertEqual(fft.method, 'fft')
        self.assertLess(np.abs(direct.values - fft.values).max(), 1e-10)

    @override_settings(APERIODIC_DIRECT_LAG_LIMIT=10)
    def test_auto_switches_to_fft(self):
        """auto picks FFT above the direct lag limit"""
        self.assertEqual(autocorrelation(generate('thue-morse', 1000), 11).method, 'fft')
        self.assertEqual(autocorrelation(generate('thue-morse', 1000), 10).method, 'direct')

    def test_rudin_shapiro_flat(self):
        """Rudin-Shapiro correlations vanish for 1 <= n <= 100"""
        gamma = autocorrelation(generate('rudin-shapiro', 1 << 20), 100)
        self.assertLessEqual(np.abs(gamma.values[1:]).max(), 0.02)

    def test_dimer_correlations(self):
        """Even dimers give gamma(1) = -1/2 and gamma(n) = 0 beyond"""
        gamma = autocorrelation(generate('dimer', 10 ** 6, seed=2024, parity='even'), 20)
        self.assertAlmostEqual(gamma.value(1), -0.5, delta=5e-3)
        for n in range(2, 21):
            self.assertLessEqual(abs(gamma.value(n)), 5e-3, n)

    def test_dimer_moments(self):
        """Dimer windows have mean within 3/sqrt(N/2) and gamma(2) within 3/sqrt(N)"""
        N = 10 ** 6
        within = 0
        for seed in range(300, 320):
            for parity in ('even', 'odd'):
                window = generate('dimer', N, seed=seed, parity=parity)
                self.assertLessEqual(abs(window.spins().mean()), 3 / math.sqrt(N / 2))
            # gamma(2) has standard deviation sqrt(2/N), so 3/sqrt(N) is a 2.1 sigma bound
            within += abs(autocorrelation(window, 2).value(2)) <= 3 / math.sqrt(N)
        self.assertGreaterEqual(within, 17)

    def test_iid_moments(self):
        """I.i.d. windows have vanishing mean and lag-2 correlation"""
        N = 10 ** 6
        window = generate('iid', N, seed=77)
        self.assertLessEqual(abs(window.spins().mean()), 3 / math.sqrt(N / 2))
        self.assertLessEqual(abs(autocorrelation(window, 2).value(2)), 3 / math.sqrt(N))

    def test_max_lag_guard(self):
        """max_lag above N/10 is refused"""
        with self.assertRaises(CorrelationError):
            autocorrelation(generate('thue-morse', 100), 11)

    def test_unknown_method(self):
        with self.assertRaises(CorrelationError):
            autocorrelation(generate('thue-morse', 100), 5, method='wiener')

    def test_non_numeric_window(self):
        """Windows without a spin map need an encoding first"""
        window = SequenceWindow(np.array([0, 1, 2] * 40), Alphabet(('x', 'y', 'z')))
        with self.assertRaises(CorrelationError):
            autocorrelation(window, 2)

    def test_value_outside_range(self):
        gamma = autocorrelation(generate('thue-morse', 100), 5)
        with self.assertRaises(CorrelationError):
            gamma.value(6)

    def test_frame(self):
        """CSV frame columns"""
        frame = autocorrelation(generate('thue-morse', 100), 5).as_frame()
        self.assertEqual(list(frame.columns), ['lag', 'gamma', 'N'])
        self.assertEqual(len(frame), 6)

    def test_shift_consistency(self):
        """Shifted windows give the same correlations up to boundary terms"""
        N, max_lag, shift = 1 << 16, 32, 100
        for name, kwargs in (('thue-morse', {}), ('fibonacci', {}), ('rudin-shapiro', {}),
                             ('paperfolding', {}), ('sturmian', {'alpha': 'golden', 'beta': 0.4}),
                             ('dimer', {'seed': 5}), ('iid', {'seed': 5})):
            window = generate(name, N, **kwargs)
            bound = 2 * shift / (N - shift - max_lag)
            self.assertLessEqual(shift_discrepancy(window, max_lag, shift), bound + 1e-12, name)

    def test_shift_range(self):
        with self.assertRaises(CorrelationError):
            shift_discrepancy(generate('thue-morse', 100), 2, 0)


class BirkhoffAverageTest(SimpleTestCase):
    """Test ergodic averages of observables"""

    def test_fibonacci_frequency(self):
        """Frequency of a in the Fibonacci word is 1/golden ratio"""
        window = generate('fibonacci', 10 ** 5)
        average = birkhoff_average(window, indicator(window.alphabet, 'a'))
        self.assertAlmostEqual(average, (math.sqrt(5) - 1) / 2, delta=1e-3)

    def test_sturmian_frequency(self):
        """Frequency of ones in a Sturmian word is alpha"""
        window = generate('sturmian', 10 ** 5, alpha='0.3819660112501051', beta=0.7)
        average = birkhoff_average(window, indicator(BINARY, '1'))
        self.assertAlmostEqual(average, 0.3819660112501051, delta=1e-3)

    def test_dimer_start(self):
        """Half the sites of a dimer window are left ends"""
        window = generate('dimer', 1000, seed=1)
        self.assertEqual(birkhoff_average(window, dimer_start(window.alphabet)), 0.5)

    def test_block_observable(self):
        """Width-2 observables read overlapping blocks"""
        window = generate('thue-morse', 1 << 12)
        obs = ObservableSpec.from_function('equal-pair', 2, window.alphabet,
                                           lambda block: 1.0 if block[0] == block[1] else 0.0)
        x = window.spins()
        expected = np.mean(x[:-1] == x[1:])
        self.assertAlmostEqual(birkhoff_average(window, obs), expected, places=12)

    def test_alphabet_mismatch(self):
        """Observables only apply to their own alphabet"""
        obs = spin(BINARY)
        with self.assertRaises(CorrelationError):
            obs.evaluate(generate('fibonacci', 10))

    def test_table_shape(self):
        with self.assertRaises(CorrelationError):
            ObservableSpec('bad', 2, BINARY, np.zeros(3))

    def test_unbounded_table(self):
        with self.assertRaises(CorrelationError):
            ObservableSpec('bad', 1, BINARY, np.array([1.0, np.inf]))

    def test_named_observables(self):
        """get_observable resolves names and rejects unknown ones"""
        self.assertEqual(get_observable('spin', BINARY).sup_norm, 1.0)
        with self.assertRaises(CorrelationError):
            get_observable('indicator', BINARY)
        with self.assertRaises(CorrelationError) as context:
            get_observable('energy', BINARY)
        self.assertIn('dimer-start', str(context.exception))
