"""
Sequence generation tests for the aperiodic toolkit
"""

import math
from fractions import Fraction
from unittest.mock import patch

import numpy as np
from django.test import SimpleTestCase

from sequences.complexity import contains_cube, entropy_estimate, is_balanced, word_complexity
from sequences.exporters import provenance_manifest, window_frame
from sequences.factors import (
    DIMER_START, THUE_MORSE_TO_PERIOD_DOUBLING, BlockMap, factor_map, get_block_map,
)
from sequences.generators import (
    continued_fraction, convergents, dimer_sample, iid, paperfolding, periodic, rational_approximation,
    rudin_shapiro, sturmian_word,
)
from sequences.serializers import ProvenanceSerializer, WindowManifestSerializer
from sequences.substitution import (
    FIBONACCI, PERIOD_DOUBLING, THUE_MORSE, SubstitutionSystem, iterate_substitution,
)
from sequences.systems import SYSTEMS, UnknownSystemError, generate, regenerate
from sequences.types import (
    GOLDEN_ROTATION, Alphabet, DimerParams, QuadraticIrrational, SequenceError, SequenceWindow,
    SturmianParams, SubstitutionError, UnseenBlockError,
)


def thue_morse_oracle(N):
    return ''.join(str(bin(n).count('1') % 2) for n in range(N))


def rudin_shapiro_oracle(N):
    out = []
    for n in range(N):
        bits = bin(n)[2:]
        pairs = sum(1 for i in range(len(bits) - 1) if bits[i:i + 2] == '11')
        out.append('+' if pairs % 2 == 0 else '-')
    return ''.join(out)


def fibonacci_oracle(N):
    word = 'a'
    while len(word) < N:
        word = ''.join('ab' if c == 'a' else 'a' for c in word)
    return word[:N]


class SubstitutionTest(SimpleTestCase):
    """Test substitution systems and their limit words"""

    def test_thue_morse_prefix(self):
        """Thue-Morse prefix matches the binary digit-sum parity"""
        window = iterate_substitution(THUE_MORSE, target_len=4096)
        self.assertEqual(window.word(), thue_morse_oracle(4096))

    def test_fibonacci_prefix(self):
        """Fibonacci limit word starts abaab"""
        window = iterate_substitution(FIBONACCI, target_len=5)
        self.assertEqual(window.word(), 'abaab')
        self.assertEqual(iterate_substitution(FIBONACCI, target_len=1000).word(), fibonacci_oracle(1000))

    def test_period_doubling_prefix(self):
        """Period-doubling starts abaaabab"""
        self.assertEqual(iterate_substitution(PERIOD_DOUBLING, target_len=8).word(), 'abaaabab')

    def test_prefix_consistency(self):
        """Shorter prefixes are prefixes of longer ones"""
        long = iterate_substitution(FIBONACCI, target_len=3000)
        short = iterate_substitution(FIBONACCI, target_len=1234)
        self.assertTrue(np.array_equal(long.values[:1234], short.values))

    def test_matrix_and_primitivity(self):
        """Substitution matrix counts letters in images"""
        self.assertEqual(THUE_MORSE.matrix().tolist(), [[1, 1], [1, 1]])
        self.assertEqual(FIBONACCI.matrix().tolist(), [[1, 1], [1, 0]])
        self.assertTrue(FIBONACCI.is_primitive())

    def test_letter_frequencies(self):
        """Fibonacci letter frequency of a is 1/golden ratio"""
        frequencies = FIBONACCI.letter_frequencies()
        self.assertAlmostEqual(frequencies['a'], (math.sqrt(5) - 1) / 2, places=12)
        self.assertAlmostEqual(sum(frequencies.values()), 1.0, places=12)

    def test_non_primitive_rejected(self):
        """require_primitive rejects reducible rules"""
        alphabet = Alphabet(('a', 'b'), {'a': 1.0, 'b': -1.0})
        with self.assertRaises(SubstitutionError):
            SubstitutionSystem(alphabet, {'a': 'ab', 'b': 'b'}, require_primitive=True)

    def test_non_growing_substitution(self):
        """A length-preserving rule cannot reach the target length"""
        alphabet = Alphabet(('a', 'b'))
        swap = SubstitutionSystem(alphabet, {'a': 'b', 'b': 'a'})
        with self.assertRaises(SubstitutionError):
            iterate_substitution(swap, 'a', 5)

    def test_non_stabilising_seed(self):
        """A seed whose image does not start with it never converges"""
        alphabet = Alphabet(('a', 'b'))
        system = SubstitutionSystem(alphabet, {'a': 'ba', 'b': 'ab'})
        with self.assertRaises(SubstitutionError):
            iterate_substitution(system, 'a', 64)

    def test_rule_outside_alphabet(self):
        """Rule images must stay in the alphabet"""
        with self.assertRaises(SubstitutionError):
            SubstitutionSystem(Alphabet(('a', 'b')), {'a': 'ac', 'b': 'a'})

    def test_round_trip_of_rules(self):
        """as_dict / from_dict keep the rule system"""
        rebuilt = SubstitutionSystem.from_dict(FIBONACCI.as_dict())
        self.assertEqual(rebuilt.as_dict(), FIBONACCI.as_dict())


class SturmianTest(SimpleTestCase):
    """Test Sturmian words and continued fractions"""

    def test_golden_sturmian_is_shifted_fibonacci(self):
        """Golden rotation word at phase 0, read from site 1, is the Fibonacci word"""
        N = 2000
        sturmian = sturmian_word(SturmianParams(GOLDEN_ROTATION), N)
        fibonacci = fibonacci_oracle(N).translate(str.maketrans('ab', '01'))
        self.assertEqual(sturmian.word()[1:], fibonacci[:N - 1])

    def test_exact_and_float_agree(self):
        """Exact and float evaluation agree on a moderate window"""
        exact = sturmian_word(SturmianParams(GOLDEN_ROTATION), 5000)
        approx = sturmian_word(SturmianParams(float(GOLDEN_ROTATION), exact=False), 5000)
        self.assertTrue(exact.same_as(SequenceWindow(approx.values, approx.alphabet)))

    def test_exact_far_offset(self):
        """Exact mode at large offsets matches integer floor evaluation"""
        offset = 10 ** 12
        window = sturmian_word(SturmianParams(GOLDEN_ROTATION), 16, offset)
        expected = []
        for n in range(offset, offset + 16):
            upper = (3 * (n + 1) - math.isqrt(5 * (n + 1) ** 2) - 1) // 2
            lower = (3 * n - math.isqrt(5 * n ** 2) - 1) // 2
            expected.append(str(upper - lower))
        self.assertEqual(window.word(), ''.join(expected))

    @patch('sequences.generators.floor_quadratic', side_effect=AssertionError('per-site fallback'))
    def test_exact_decimal_phase(self, _floor):
        """A float phase of 0.1 is read as 1/10 and stays on the vectorised path"""
        window = sturmian_word(SturmianParams(GOLDEN_ROTATION, 0.1), 10 ** 6, 1)
        self.assertEqual(window.provenance.parameters['beta'], 0.1)

        def floor_at(n):
            # floor(n (3 - sqrt 5) / 2 + 1/10) for n >= 1
            return (30 * n + 1 - math.isqrt(500 * n * n)) // 20

        for n in (1, 2, 3, 1000, 123457, 999999, 10 ** 6):
            self.assertEqual(int(window.values[n - 1]), floor_at(n + 1) - floor_at(n), n)

    def test_complexity_is_n_plus_one(self):
        """Sturmian words have p(n) = n + 1"""
        window = sturmian_word(SturmianParams(GOLDEN_ROTATION, 0.3), 20000)
        for n in range(1, 30):
            self.assertEqual(word_complexity(window, n), n + 1)

    def test_balanced(self):
        """Sturmian words are balanced"""
        window = sturmian_word(SturmianParams(GOLDEN_ROTATION), 5000)
        self.assertTrue(is_balanced(window, 50))

    def test_rational_alpha_needs_periodic_flag(self):
        """Rational rotation numbers are rejected unless periodic is set"""
        with self.assertRaises(SequenceError):
            SturmianParams(0.5)
        window = sturmian_word(SturmianParams(Fraction(1, 2), 0.0, periodic=True), 6)
        self.assertEqual(window.word(), '010101')

    def test_alpha_range(self):
        """alpha must lie in (0, 1)"""
        with self.assertRaises(SequenceError):
            SturmianParams(1.5)

    def test_continued_fraction_and_convergents(self):
        """Convergents of 355/113 end at the value itself"""
        terms = continued_fraction(Fraction(355, 113))
        self.assertEqual(terms, [3, 7, 16])
        self.assertEqual(list(convergents(terms)), [(3, 1), (22, 7), (355, 113)])

    def test_rational_approximation(self):
        """Exact rationals are detected, golden rotation is not"""
        self.assertEqual(rational_approximation(0.25), (1, 4))
        self.assertIsNone(rational_approximation(float(GOLDEN_ROTATION)))

    def test_quadratic_irrational_validation(self):
        """Perfect squares are not quadratic irrationals"""
        with self.assertRaises(SequenceError):
            QuadraticIrrational(1, 1, 4, 2)


class FormulaSystemTest(SimpleTestCase):
    """Test direct-formula and stochastic generators"""

    def test_rudin_shapiro(self):
        """Rudin-Shapiro matches the count of 11 blocks"""
        self.assertEqual(rudin_shapiro(8).word(), '+++-++-+')
        self.assertEqual(rudin_shapiro(2048).word(), rudin_shapiro_oracle(2048))

    def test_rudin_shapiro_offset(self):
        """Windows at an offset are slices of the full word"""
        full = rudin_shapiro(5000)
        self.assertTrue(rudin_shapiro(1000, 3000).same_as(full.slice(3000, 4000)))

    def test_paperfolding(self):
        """Regular paperfolding starts 1101100111001001"""
        self.assertEqual(paperfolding(16).word(), '1101100111001001')

    def test_paperfolding_negative_offset(self):
        """Formula systems start at site 0"""
        with self.assertRaises(SequenceError):
            paperfolding(10, -1)

    def test_dimer_pairs_cancel(self):
        """Spins inside each dimer sum to zero"""
        even = dimer_sample(DimerParams('even', 7), 1000).spins()
        self.assertTrue(np.all(even[0::2] + even[1::2] == 0))
        odd = dimer_sample(DimerParams('odd', 7), 1000).spins()
        self.assertTrue(np.all(odd[1:-1:2] + odd[2::2] == 0))

    def test_dimer_offsets_agree(self):
        """A dimer window at an offset is a slice of the window at 0"""
        full = dimer_sample(DimerParams('odd', 11), 400)
        part = dimer_sample(DimerParams('odd', 11), 100, 200)
        self.assertTrue(part.same_as(full.slice(200, 300)))

    def test_dimer_odd_length(self):
        """Dimer windows need an even length"""
        with self.assertRaises(SequenceError):
            dimer_sample(DimerParams('even', 1), 11)

    def test_dimer_needs_seed(self):
        """The dimer system refuses to run without a seed"""
        with self.assertRaises(SequenceError):
            generate('dimer', 10)

    def test_iid_reproducible(self):
        """Same seed gives the same window; offsets slice it"""
        a = iid(1000, 5)
        self.assertTrue(a.same_as(iid(1000, 5)))
        self.assertFalse(np.array_equal(a.values, iid(1000, 6).values))
        self.assertTrue(iid(100, 5, 300).same_as(a.slice(300, 400)))

    def test_periodic(self):
        """Periodic windows repeat the pattern"""
        self.assertEqual(periodic('+++-', 8).word(), '+++-+++-')
        self.assertEqual(periodic('ab', 5, 1).word(), 'babab')

    def test_unknown_system(self):
        """Unknown names list the valid options"""
        with self.assertRaises(UnknownSystemError) as context:
            generate('penrose', 10)
        self.assertIn('thue-morse', str(context.exception))

    def test_registry_windows(self):
        """Every registered system produces a window of the requested length"""
        for name, spec in SYSTEMS.items():
            seed = 3 if spec.needs_seed else None
            window = generate(name, 64, seed=seed)
            self.assertEqual(len(window), 64, name)
            self.assertTrue(window.is_numeric, name)


class WindowTest(SimpleTestCase):
    """Test window invariants, flips and regeneration"""

    def test_values_read_only(self):
        """Window values cannot be modified"""
        window = periodic('+-', 4)
        with self.assertRaises(ValueError):
            window.values[0] = 1

    def test_negative_values_rejected(self):
        """Negative symbol indices are invalid"""
        with self.assertRaises(SequenceError):
            SequenceWindow(np.array([0, -1]), Alphabet(('a', 'b')))

    def test_flip_dimer(self):
        """Flipping swaps the spin sign of every dimer end"""
        window = dimer_sample(DimerParams('even', 2), 20)
        flipped = window.flipped()
        self.assertTrue(np.array_equal(flipped.spins(), -window.spins()))
        self.assertEqual([s[0] for s in flipped.symbols()], [s[0] for s in window.symbols()])

    def test_flip_without_partner(self):
        """Alphabets without a spin-flip partner cannot be flipped"""
        window = SequenceWindow(np.array([0, 1]), Alphabet(('a', 'b'), {'a': 1.0, 'b': 0.5}))
        with self.assertRaises(SequenceError):
            window.flipped()

    def test_regenerate(self):
        """Provenance rebuilds every kind of window bit-exactly"""
        windows = [
            generate('thue-morse', 300, 17),
            generate('sturmian', 300, 5, alpha='golden', beta=0.25),
            generate('sturmian', 100, 0, alpha='1/3', periodic=True),
            generate('dimer', 300, 4, seed=9, parity='odd'),
            generate('iid', 300, 10, seed=4),
            generate('periodic', 50, 3, pattern='aab'),
            factor_map(generate('thue-morse', 300), THUE_MORSE_TO_PERIOD_DOUBLING),
            generate('dimer', 40, seed=1).flipped(),
            generate('rudin-shapiro', 512).slice(100, 200),
        ]
        for window in windows:
            rebuilt = regenerate(window.provenance.as_dict())
            self.assertTrue(rebuilt.same_as(window), window.provenance.generator)

    def test_export_frame(self):
        """CSV frame has index, symbol and spin columns"""
        frame = window_frame(generate('fibonacci', 5, 2))
        self.assertEqual(list(frame.columns), ['index', 'symbol', 'spin'])
        self.assertEqual(frame['index'].tolist(), [2, 3, 4, 5, 6])
        self.assertEqual(''.join(frame['symbol']), fibonacci_oracle(7)[2:])

    def test_manifest_schema(self):
        """Window manifests validate against their serializer"""
        manifest = provenance_manifest(generate('dimer', 10, seed=3))
        serializer = WindowManifestSerializer(data=manifest)
        self.assertTrue(serializer.is_valid(), serializer.errors)

    def test_stochastic_provenance_needs_seed(self):
        """Provenance of a stochastic system must record its seed"""
        serializer = ProvenanceSerializer(data={'generator': 'iid', 'length': 10})
        self.assertFalse(serializer.is_valid())


class FactorTest(SimpleTestCase):
    """Test sliding-block codes"""

    def test_thue_morse_factor_is_period_doubling(self):
        """The difference map sends Thue-Morse onto period-doubling"""
        tm = iterate_substitution(THUE_MORSE, target_len=4097)
        pd = iterate_substitution(PERIOD_DOUBLING, target_len=4096)
        factor = factor_map(tm, THUE_MORSE_TO_PERIOD_DOUBLING)
        self.assertEqual(len(factor), 4096)
        self.assertEqual(factor.word(), pd.word())

    def test_dimer_start(self):
        """Dimer-start marks left ends"""
        window = dimer_sample(DimerParams('even', 3), 10)
        starts = factor_map(window, DIMER_START).spins()
        self.assertEqual(starts.tolist(), [1.0, 0.0] * 5)

    def test_unseen_block(self):
        """Blocks missing from the table raise UnseenBlockError"""
        partial = BlockMap(2, {('0', '1'): 'a'}, Alphabet(('a', 'b')))
        with self.assertRaises(UnseenBlockError):
            factor_map(generate('thue-morse', 16), partial)

    def test_unknown_block_map(self):
        """Unknown block map names list the valid ones"""
        with self.assertRaises(SequenceError) as context:
            get_block_map('nope')
        self.assertIn('dimer-start', str(context.exception))

    def test_block_map_round_trip(self):
        """Block maps survive as_dict / from_dict"""
        rebuilt = BlockMap.from_dict(THUE_MORSE_TO_PERIOD_DOUBLING.as_dict())
        self.assertEqual(rebuilt.table, THUE_MORSE_TO_PERIOD_DOUBLING.table)


class ComplexityTest(SimpleTestCase):
    """Test factor complexity and entropy profiles"""

    def test_thue_morse_complexity(self):
        """Thue-Morse p(n) for small n"""
        window = iterate_substitution(THUE_MORSE, target_len=1 << 14)
        counts = [word_complexity(window, n) for n in range(1, 10)]
        self.assertEqual(counts, [2, 4, 6, 10, 12, 16, 20, 22, 24])

    def test_complexity_matches_brute_force(self):
        """Vectorised counting matches a set of substrings"""
        word = generate('rudin-shapiro', 3000).word()
        window = generate('rudin-shapiro', 3000)
        for n in (1, 5, 11, 40):
            self.assertEqual(word_complexity(window, n), len({word[i:i + n] for i in range(len(word) - n + 1)}))

    def test_periodic_complexity(self):
        """A period-two word has exactly two factors of length 3"""
        self.assertEqual(word_complexity(periodic('01', 10 ** 4), 3), 2)

    def test_fibonacci_complexity(self):
        """Fibonacci p(10) = 11"""
        self.assertEqual(word_complexity(generate('fibonacci', 10 ** 5), 10), 11)

    def test_iid_complexity(self):
        """Every binary word of length 10 occurs in 10^5 i.i.d. sites"""
        self.assertEqual(word_complexity(generate('iid', 10 ** 5, seed=12), 10), 1024)

    def test_iid_entropy(self):
        """i.i.d. spins have proxy log 2 within 5% for n <= 12"""
        profile = entropy_estimate(generate('iid', 10 ** 6, seed=13), 12)
        for p in profile.points:
            self.assertLessEqual(abs(p.proxy - math.log(2)), 0.05 * math.log(2))

    def test_periodic_entropy(self):
        """The proxy of a periodic word is exactly zero beyond its period"""
        profile = entropy_estimate(periodic('+++-', 1000), 10)
        for p in profile.points:
            if p.n > 4:
                self.assertEqual(p.proxy, 0.0)
        self.assertEqual(profile.trend, 'zero')

    def test_undersampled_length(self):
        """Factor lengths above N/4 are refused"""
        with self.assertRaises(SequenceError):
            word_complexity(generate('fibonacci', 40), 11)

    def test_rudin_shapiro_entropy(self):
        """Rudin-Shapiro has a small entropy proxy and strictly falling rates"""
        window = generate('rudin-shapiro', 10 ** 6)
        profile = entropy_estimate(window, 20, 4)
        self.assertLessEqual(profile.point(16).proxy, 0.15)
        rates = [p.rate for p in profile.points]
        self.assertTrue(all(b < a for a, b in zip(rates, rates[1:])))
        self.assertEqual(profile.trend, 'decreasing')

    def test_proxy_monotone(self):
        """The proxy never increases with n"""
        profile = entropy_estimate(generate('iid', 20000, seed=1), 10)
        proxies = [p.proxy for p in profile.points]
        self.assertTrue(all(b <= a for a, b in zip(proxies, proxies[1:])))

    def test_cubes(self):
        """Thue-Morse is cube-free, a periodic word is not"""
        self.assertFalse(contains_cube(iterate_substitution(THUE_MORSE, target_len=4096), 20))
        self.assertTrue(contains_cube(periodic('+-', 12), 2))

    def test_thue_morse_unbalanced(self):
        """Thue-Morse is not balanced"""
        self.assertFalse(is_balanced(generate('thue-morse', 100), 4))
