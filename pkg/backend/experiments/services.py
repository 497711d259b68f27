"""
Batch experiment orchestration

run(subcommand, config) validates the configuration, registers an
ExperimentRun, executes the subcommand, writes CSV/JSON outputs into a
per-run directory and a manifest listing every output with its SHA-256.
"""

import logging
import math
import time
from pathlib import Path
from typing import Any, Dict, List, Mapping

import numpy as np
import pandas as pd
from django.conf import settings
from django.utils import timezone

from backend.fingerprint import HashUtility
from correlation.observables import get_observable
from correlation.services import autocorrelation
from gibbs.interactions import get_interaction, interaction_summary
from gibbs.sampler import GibbsChain, chain_observables, symmetric_mixture_correlation
from gibbs.services import summability_norm
from overlap.samplers import DimerSampler, PhaseSampler, SeedSampler, ShiftSampler, get_sampler
from overlap.services import atom_scan, sample_overlap_distribution, task_seeds, ultrametricity_test
from sequences.complexity import entropy_estimate
from sequences.exporters import provenance_manifest, window_frame
from sequences.factors import factor_map, get_block_map
from sequences.serializers import WindowManifestSerializer
from sequences.systems import generate
from sequences.types import SequenceWindow
from spectra.services import averaged_periodogram, bragg_scan, eigenvalue_scan, periodogram

from .models import ExperimentRun
from .outputs import to_json_text, write_csv, write_json
from .serializers import MANIFEST_SCHEMA_VERSION, ExperimentConfigSerializer, ManifestSerializer, identity_config

logger = logging.getLogger('aperiodic')

# Windows up to this length are echoed in the run summary
ECHO_LENGTH = 64


class ExperimentRunner:
    """
    Executes one validated configuration and records the run
    """

    def __init__(self, config: Mapping[str, Any]):
        self.config = dict(config)
        self.subcommand = self.config['subcommand']
        self.outputs: List[Dict[str, Any]] = []
        self.run_record: ExperimentRun = None
        self.directory: Path = None

    # Window helpers

    def _params(self) -> Dict[str, Any]:
        return dict(self.config.get('params') or {})

    def _window(self, N: int) -> SequenceWindow:
        """Window of the configured system, mapped through the block map when one is set"""
        block_map = self.config.get('block_map')
        length = N
        if block_map:
            source_alphabet = generate(self.config['system'], 2, seed=self.config.get('seed'),
                                       **self._params()).alphabet
            mapping = get_block_map(block_map, source_alphabet)
            length = N + mapping.length - 1
        window = generate(self.config['system'], length, self.config['offset'],
                          self.config.get('seed'), **self._params())
        if block_map:
            window = factor_map(window, mapping)
        return window

    def _csv(self, frame: pd.DataFrame, name: str):
        self.outputs.append(write_csv(frame, self.directory, name))

    def _json(self, data: Any, name: str, rows: int = None):
        self.outputs.append(write_json(data, self.directory, name, rows))

    # Subcommands

    def _generate(self) -> Dict[str, Any]:
        window = self._window(self.config['N'])
        manifest = provenance_manifest(window)
        WindowManifestSerializer(data=manifest).is_valid(raise_exception=True)
        self._csv(window_frame(window), 'window.csv')
        self._json(manifest, 'provenance.json')
        summary = {'N': len(window), 'offset': window.offset}
        if len(window) <= ECHO_LENGTH:
            summary['word'] = window.word()
        return summary

    def _autocorr(self) -> Dict[str, Any]:
        window = self._window(self.config['N'])
        result = autocorrelation(window, self.config['max_lag'], self.config['method'])
        self._csv(result.as_frame(), 'autocorrelation.csv')
        off_zero = np.abs(result.values[1:]) if result.values.size > 1 else np.zeros(1)
        return {'N': result.N, 'method': result.method, 'max_abs_off_zero': float(off_zero.max())}

    def _diffract(self) -> Dict[str, Any]:
        N = self.config['N']
        window = self._window(N)
        if self.config.get('segment_length'):
            estimate = averaged_periodogram(window, self.config['segment_length'])
        else:
            estimate = periodogram(window, self.config['grid'])
        self._csv(estimate.as_frame(), 'spectrum.csv')

        probe_k = None
        if self.config['probe'] == 'dyadic':
            level = self.config['probe_level']
            probe_k = 2 * math.pi * np.arange(2 ** level) / 2 ** level
        report = bragg_scan(window.prefix, self.config['N_list'], self.config['grid'],
                            self.config['top_m'], probe_k)
        self._csv(report.as_frame(), 'bragg.csv')
        self._json(report.as_dict(), 'bragg_report.json', len(report.peaks))
        return {
            'N': estimate.N,
            'grid_size': estimate.grid_size,
            'coarse_grid': estimate.coarse_grid,
            'segments': estimate.segments,
            'atoms_off_zero': len(report.atoms(exclude_zero=True)),
            'max_bragg': float(report.peaks[0].intensity) if report.peaks else 0.0,
        }

    def _eigenvalue(self) -> Dict[str, Any]:
        observable, symbol = self.config['observable'], self.config.get('symbol')
        scan = eigenvalue_scan(
            self._window,
            lambda window: get_observable(observable, window.alphabet, symbol),
            self.config['theta'],
            self.config['N_list'],
            self.config['threshold'],
        )
        self._csv(scan.as_frame(), 'eigenvalue.csv')
        self._json(scan.as_dict(), 'eigenvalue_scan.json', len(scan.reports))
        return {'theta': self.config['theta'], 'certified': scan.certified,
                'moduli': [r.modulus for r in scan.reports]}

    def _sampler(self):
        system, params, kind = self.config['system'], self._params(), self.config['sampler']
        if kind == 'shift':
            return ShiftSampler(system, **params)
        if kind == 'phase':
            return PhaseSampler(params.get('alpha', 'golden'), bool(params.get('exact', False)))
        if kind == 'seed':
            return SeedSampler(system, **params)
        if kind == 'dimer':
            return DimerSampler()
        return get_sampler(system, **params)

    def _overlap(self) -> Dict[str, Any]:
        sampler = self._sampler()
        distribution_seed, triple_seed = task_seeds(self.config['seed'], 2)
        workers = self.config.get('workers')
        distribution = sample_overlap_distribution(
            sampler, self.config['M'], self.config['N'], distribution_seed, workers,
        )
        atoms = atom_scan(distribution, self.config['resolution'], self.config['min_weight'])
        self._csv(distribution.as_frame(), 'overlaps.csv')
        self._csv(pd.DataFrame({'q': distribution.samples,
                                'ecdf': np.arange(1, distribution.M + 1) / distribution.M}), 'ecdf.csv')

        summary = {
            'distribution': distribution.summary(),
            'atoms': [a.as_dict() for a in atoms],
            'max_atom_weight': max((a.weight for a in atoms), default=0.0),
            'sampler': sampler.describe(),
        }
        if self.config['triples']:
            report = ultrametricity_test(sampler, self.config['triples'], self.config['N'],
                                         self.config['epsilon'], triple_seed, workers)
            summary['ultrametricity'] = report.as_dict()
        self._json(summary, 'overlap_summary.json')
        return summary

    def _gibbs(self) -> Dict[str, Any]:
        interaction = get_interaction(self.config['interaction'], **self._params())
        shape = self.config['shape']
        beta, seed = self.config['beta'], self.config['seed']
        distances = self.config['distances']
        rows = []

        if self.config['mixture']:
            results = [
                symmetric_mixture_correlation(interaction, shape, beta, n, self.config['sweeps'],
                                              self.config['burn_in'], seed, self.config['batches'])
                for n in distances
            ]
            for result in results:
                rows.append({'n': result.distance, 'f': result.correlation.value,
                             'error': result.correlation.error, 'samples': result.correlation.samples})
            details = {'mixture': [r.as_dict() for r in results]}
        else:
            omega = self.config.get('frame_value') if self.config['boundary'] == 'frame' else None
            chain = GibbsChain(interaction, shape, beta, self.config['boundary'], omega, seed,
                               self.config['order'])
            observed = chain_observables(chain, distances, self.config['sweeps'], self.config['burn_in'],
                                         self.config['batches'])
            for n in distances:
                estimate = observed[f'pair_{n}']
                rows.append({'n': n, 'f': estimate.value, 'error': estimate.error, 'samples': estimate.samples})
            details = {
                'magnetization': observed['magnetization'].as_dict(),
                'acceptance_rate': chain.acceptance_rate,
                'sweeps_run': chain.sweeps,
            }

        self._csv(pd.DataFrame(rows, columns=['n', 'f', 'error', 'samples']), 'correlations.csv')
        summary = {
            'interaction': interaction_summary(interaction),
            'beta': beta,
            'boundary': 'plus/minus mixture' if self.config['mixture'] else self.config['boundary'],
            'summability': summability_norm(interaction).as_dict(),
            **details,
        }
        self._json(summary, 'gibbs_summary.json', len(rows))
        return summary

    def _complexity(self) -> Dict[str, Any]:
        window = self._window(self.config['N'])
        profile = entropy_estimate(window, self.config['n_max'])
        self._csv(pd.DataFrame([p.as_dict() for p in profile.points],
                               columns=['n', 'complexity', 'rate', 'increment', 'proxy']), 'complexity.csv')
        return {'trend': profile.trend, 'final_proxy': profile.final_proxy}

    HANDLERS = {
        'generate': _generate,
        'autocorr': _autocorr,
        'diffract': _diffract,
        'eigenvalue': _eigenvalue,
        'overlap': _overlap,
        'gibbs': _gibbs,
        'complexity': _complexity,
    }

    def _manifest(self, summary: Dict[str, Any], elapsed: float) -> Dict[str, Any]:
        manifest = {
            'schema_version': MANIFEST_SCHEMA_VERSION,
            'toolkit_version': settings.APERIODIC_VERSION,
            'run_id': str(self.run_record.id),
            'subcommand': self.subcommand,
            'system': self.run_record.system,
            'seed': self.config.get('seed'),
            'config': self.config,
            'config_hash': self.run_record.config_hash,
            'outputs': self.outputs,
            'summary': summary,
            'created_at': self.run_record.created_at.isoformat(),
            'processing_time': elapsed,
        }
        serializer = ManifestSerializer(data=manifest)
        serializer.is_valid(raise_exception=True)
        return manifest

    def execute(self) -> Dict[str, Any]:
        """Run the subcommand; failures are recorded on the run and returned, not raised"""
        system = self.config.get('system') or self.config.get('interaction') or ''
        self.run_record = ExperimentRun.objects.create(
            subcommand=self.subcommand,
            system=system,
            config=self.config,
            config_hash=HashUtility.hash_config(identity_config(self.config)),
            seed=self.config.get('seed'),
            status='running',
        )
        start_time = time.time()

        try:
            self.directory = Path(self.config['output_dir']) / f"{self.subcommand}-{self.run_record.id}"
            self.directory.mkdir(parents=True, exist_ok=True)
            self.run_record.output_dir = str(self.directory)

            summary = self.HANDLERS[self.subcommand](self)
            elapsed = time.time() - start_time

            manifest = self._manifest(summary, elapsed)
            manifest_path = self.directory / 'manifest.json'
            manifest_path.write_text(to_json_text(manifest))

            self.run_record.outputs = self.outputs
            self.run_record.manifest_path = str(manifest_path)
            self.run_record.processing_time = elapsed
            self.run_record.status = 'completed'
            self.run_record.completed_at = timezone.now()
            self.run_record.save()

            logger.info(f"Run {self.run_record.id} ({self.subcommand} {system}) completed in "
                        f"{elapsed:.2f}s with {len(self.outputs)} outputs")
            return {
                'success': True,
                'exit_status': 0,
                'run_id': str(self.run_record.id),
                'output_dir': str(self.directory),
                'manifest_path': str(manifest_path),
                'outputs': self.outputs,
                'summary': summary,
            }

        except Exception as e:
            logger.error(f"Run {self.run_record.id} ({self.subcommand} {system}) failed: {str(e)}")
            self.run_record.status = 'failed'
            self.run_record.error_message = str(e)
            self.run_record.processing_time = time.time() - start_time
            self.run_record.outputs = self.outputs
            self.run_record.save()
            return {
                'success': False,
                'exit_status': 1,
                'run_id': str(self.run_record.id),
                'error': str(e),
            }


def validate_config(subcommand: str, config: Mapping[str, Any]) -> Dict[str, Any]:
    """Validated config with defaults; raises serializers.ValidationError"""
    serializer = ExperimentConfigSerializer(data={**dict(config), 'subcommand': subcommand})
    serializer.is_valid(raise_exception=True)
    return dict(serializer.validated_data)


def run(subcommand: str, config: Mapping[str, Any]) -> Dict[str, Any]:
    """Programmatic entry point behind the management commands"""
    validated = validate_config(subcommand, config)
    return ExperimentRunner(validated).execute()
