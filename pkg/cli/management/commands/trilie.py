import sys

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

from cli.reports import build_report, render_report
from cli.selftest import run_selftest
from cli.serializers import (
    describe_errors, parse_coefficients, parse_compatible_rep, parse_deformation, parse_extension,
    parse_operator, parse_pair, parse_rep, parse_section, parse_structure,
)
from compatible.bicomplex import compatible_cohomology, pair_derivations
from compatible.deformations import infinitesimal_check, infinitesimal_equivalent, order2_by_evaluation, order2_check
from compatible.nijenhuis import compatible_nijenhuis_check, deformed_compatible_pair, trivial_deformation_from_nijenhuis
from compatible.pairs import (
    CompatiblePair, compatible_mc_check, deformation_mc_check, pencil_check, validate_compatible,
)
from compatible.representations import CompatibleRepresentation, adjoint_pair, validate_compatible_representation
from core.exceptions import DimensionMismatch, PathDisagreement, PreconditionFailed, TrilieError
from extensions.abelian import (
    Section, classify, cocycle_class_equal, extract_cocycle, induced_representation,
)
from threelie.algebras import derivation_space, validate_fi, validate_fi_via_mc
from threelie.cohomology import cohomology
from threelie.nijenhuis import deformed_bracket, nijenhuis_pair_compatibility, nijenhuis_torsion
from threelie.representations import Representation, adjoint_representation, validate_representation


class Command(BaseCommand):
    help = 'Exact computations on 3-Lie algebras and compatible 3-Lie algebras given as JSON files'

    def add_arguments(self, parser):
        verbs = parser.add_subparsers(dest='verb', required=True, metavar='verb')

        validate = self._verb(verbs, 'validate', 'Fundamental Identity, compatibility and representation checks')
        validate.add_argument('structure')
        validate.add_argument('--coeffs', help='representation file to validate against the structure')
        validate.add_argument('--grid', choices=('fixed', 'random'), default='fixed')
        validate.add_argument('--seed', type=int)

        cohomology_verb = self._verb(verbs, 'cohomology', 'Dimensions of the cohomology groups')
        cohomology_verb.add_argument('structure')
        cohomology_verb.add_argument('--degree', type=int, default=2)
        coefficients = cohomology_verb.add_mutually_exclusive_group()
        coefficients.add_argument('--coeffs', help='representation file')
        coefficients.add_argument('--adjoint', action='store_true', help='adjoint coefficients')
        cohomology_verb.add_argument('--raw-complex', action='store_true', dest='raw_complex')

        derivations = self._verb(verbs, 'derivations', 'Derivations of an algebra or of both brackets of a pair')
        derivations.add_argument('structure')

        mc_check = self._verb(verbs, 'mc-check', 'Maurer-Cartan equations of a pair or of a deformed pair')
        mc_check.add_argument('pair')
        mc_check.add_argument('deformation', nargs='?')

        deform_check = self._verb(verbs, 'deform-check', 'Infinitesimal deformation (2-cocycle) check')
        deform_check.add_argument('pair')
        deform_check.add_argument('deformation')

        deform_equivalent = self._verb(verbs, 'deform-equivalent', 'Equivalence of two infinitesimal deformations')
        deform_equivalent.add_argument('pair')
        deform_equivalent.add_argument('first')
        deform_equivalent.add_argument('second')

        nijenhuis = self._verb(verbs, 'nijenhuis', 'Nijenhuis torsion and the deformed brackets')
        nijenhuis.add_argument('structure')
        nijenhuis.add_argument('operator')

        order2 = self._verb(verbs, 'deform-order2', 'The ten equations of a 2-order deformation')
        order2.add_argument('pair')
        order2.add_argument('deformation')
        order2.add_argument('--evaluate', action='store_true', help='also check the deformed pair at t = 0..4')

        build = self._verb(verbs, 'extension-build', 'Build an abelian extension from cocycle data')
        build.add_argument('extension')

        extract = self._verb(verbs, 'extension-extract', 'Representation and cocycles read off through a section')
        extract.add_argument('extension')
        extract.add_argument('--section', help='section file; the canonical section by default')

        classify_verb = self._verb(verbs, 'extension-classify', 'Decide whether two extensions are isomorphic')
        classify_verb.add_argument('first')
        classify_verb.add_argument('second')

        selftest = self._verb(verbs, 'selftest', 'Run the property suite')
        selftest.add_argument('--seed', type=int)

    def _verb(self, verbs, name, help_text):
        parser = verbs.add_parser(name, help=help_text)
        parser.add_argument('--json', action='store_true', dest='as_json', help='machine-readable report')
        return parser

    def handle(self, *args, **options):
        verb = options['verb']
        handler = getattr(self, 'handle_' + verb.replace('-', '_'))
        try:
            inputs, verdict, results = handler(options)
            report = build_report(verb, inputs, verdict, results)
        except serializers.ValidationError as exc:
            raise CommandError('invalid input:\n  ' + '\n  '.join(describe_errors(exc.detail)), returncode=2)
        except (TrilieError, OSError) as exc:
            raise CommandError(f'{type(exc).__name__}: {exc}', returncode=2)
        self.stdout.write(render_report(report, options.get('as_json', False)))
        if not verdict:
            sys.exit(1)

    def handle_validate(self, options):
        path = options['structure']
        inputs = [path]
        structure = parse_structure(path)
        if isinstance(structure, CompatiblePair):
            verdict = validate_compatible(structure)
            mc = compatible_mc_check(structure.pi1, structure.pi2)
            pencil = pencil_check(structure, grid=options['grid'], seed=options['seed'])
            if not mc.ok == pencil.ok == verdict.ok:
                raise PathDisagreement('compatibility', 'mixed identity, Maurer-Cartan and pencil checks differ')
            results = {'kind': 'compatible pair', 'compatible': verdict, 'maurer_cartan': mc, 'pencil': pencil}
        else:
            verdict = validate_fi(structure)
            if validate_fi_via_mc(structure) != verdict.ok:
                raise PathDisagreement('fundamental identity', 'basis check and [pi, pi] = 0 differ')
            results = {'kind': '3-Lie algebra', 'fundamental_identity': verdict}
        ok = verdict.ok
        if options['coeffs']:
            inputs.append(options['coeffs'])
            coeffs = parse_coefficients(options['coeffs'], structure.dim)
            rep_verdict = self._validate_coefficients(structure, coeffs)
            results['representation'] = rep_verdict
            ok = ok and rep_verdict.ok
        return inputs, ok, results

    def _validate_coefficients(self, structure, coeffs):
        if isinstance(structure, CompatiblePair):
            if not isinstance(coeffs, CompatibleRepresentation):
                raise PreconditionFailed('a compatible pair needs a representation file with "rho" and "mu"')
            return validate_compatible_representation(structure, coeffs)
        if not isinstance(coeffs, Representation):
            raise PreconditionFailed('a single algebra needs a representation file with "rho" only')
        return validate_representation(structure, coeffs)

    def handle_cohomology(self, options):
        path = options['structure']
        inputs = [path]
        structure = parse_structure(path)
        coeffs = None
        if options['coeffs']:
            inputs.append(options['coeffs'])
            if isinstance(structure, CompatiblePair):
                coeffs = parse_compatible_rep(options['coeffs'], structure.dim)
            else:
                coeffs = parse_rep(options['coeffs'], structure.dim)
        if isinstance(structure, CompatiblePair):
            if options['adjoint']:
                coeffs = adjoint_pair(structure)
            report = compatible_cohomology(
                structure, coeffs, max_degree=options['degree'], raw=options['raw_complex'],
            )
            coefficients = 'file' if options['coeffs'] else ('adjoint' if options['adjoint'] else 'self')
        else:
            if coeffs is None:
                coeffs = adjoint_representation(structure)
            report = cohomology(structure, coeffs, max_degree=options['degree'], raw=options['raw_complex'])
            coefficients = 'file' if options['coeffs'] else 'adjoint'
        results = {
            'coefficients': coefficients,
            'complex': report,
            'dimensions': {f'H{row.degree}': row.cohomology_dim for row in report.degrees},
        }
        return inputs, True, results

    def handle_derivations(self, options):
        structure = parse_structure(options['structure'])
        if isinstance(structure, CompatiblePair):
            basis = pair_derivations(structure)
            if structure.is_compatible:
                h1 = compatible_cohomology(structure, max_degree=1).cohomology_dim(1)
                if h1 != len(basis):
                    raise PathDisagreement('derivations', 'solution space and first cohomology differ')
        else:
            basis = derivation_space(structure)
            if structure.satisfies_fi:
                h1 = cohomology(structure, adjoint_representation(structure), max_degree=1).cohomology_dim(1)
                if h1 != len(basis):
                    raise PathDisagreement('derivations', 'solution space and first cohomology differ')
        return [options['structure']], True, {'dimension': len(basis), 'basis': basis}

    def handle_mc_check(self, options):
        pair = parse_pair(options['pair'])
        if options['deformation'] is None:
            mc = compatible_mc_check(pair.pi1, pair.pi2)
            return [options['pair']], mc.ok, {'maurer_cartan': mc}
        data = self._deformation_for(pair, options['deformation'])
        verdict = deformation_mc_check(pair, data.omega1, data.omega2)
        return [options['pair'], options['deformation']], verdict.ok, {'deformed_pair': verdict}

    def _deformation_for(self, pair, path):
        data = parse_deformation(path)
        if data.dim != pair.dim:
            raise DimensionMismatch(f'deformation of dimension {data.dim} for a pair of dimension {pair.dim}')
        return data

    def handle_deform_check(self, options):
        pair = parse_pair(options['pair'])
        data = self._deformation_for(pair, options['deformation'])
        verdict = infinitesimal_check(pair, data)
        return [options['pair'], options['deformation']], verdict.ok, {'infinitesimal_deformation': verdict}

    def handle_deform_equivalent(self, options):
        pair = parse_pair(options['pair'])
        first = self._deformation_for(pair, options['first'])
        second = self._deformation_for(pair, options['second'])
        result = infinitesimal_equivalent(pair, first, second)
        inputs = [options['pair'], options['first'], options['second']]
        return inputs, result.equivalent, {'equivalence': result}

    def handle_nijenhuis(self, options):
        structure = parse_structure(options['structure'])
        operator = parse_operator(options['operator'])
        inputs = [options['structure'], options['operator']]
        if operator.shape != (structure.dim, structure.dim):
            raise DimensionMismatch(f'operator of shape {operator.shape} on dimension {structure.dim}')
        if isinstance(structure, CompatiblePair):
            verdict = compatible_nijenhuis_check(structure, operator)
            results = {'nijenhuis': verdict}
            if verdict.ok:
                results['deformed_pair'] = deformed_compatible_pair(structure, operator)
                results['trivial_deformation'] = trivial_deformation_from_nijenhuis(structure, operator)
            return inputs, verdict.ok, results
        torsion = nijenhuis_torsion(structure, operator)
        results = {'nijenhuis': torsion.is_zero(), 'torsion': torsion}
        if torsion.is_zero():
            results['deformed_bracket'] = deformed_bracket(structure, operator)
            if structure.satisfies_fi:
                results['pair_compatibility'] = nijenhuis_pair_compatibility(structure, operator)
        return inputs, torsion.is_zero(), results

    def handle_deform_order2(self, options):
        pair = parse_pair(options['pair'])
        data = self._deformation_for(pair, options['deformation'])
        verdict = order2_check(pair, data)
        results = {'order2': verdict}
        if options['evaluate']:
            by_evaluation = order2_by_evaluation(pair, data)
            if by_evaluation != verdict.ok:
                raise PathDisagreement('order-2 deformation', 'the ten equations and evaluation at t = 0..4 differ')
            results['by_evaluation'] = by_evaluation
        return [options['pair'], options['deformation']], verdict.ok, results

    def handle_extension_build(self, options):
        result = parse_extension(options['extension'])
        results = {'cocycle': result.verdict}
        if result.ok:
            results['total'] = result.extension.total
        return [options['extension']], result.ok, results

    def _valid_extension(self, path):
        result = parse_extension(path)
        if not result.ok:
            raise PreconditionFailed(f'{path}: the cocycle data does not define an extension')
        return result.extension

    def handle_extension_extract(self, options):
        ext = self._valid_extension(options['extension'])
        inputs = [options['extension']]
        canonical = Section.canonical(ext.base.dim, ext.module_dim)
        sigma = canonical
        if options['section']:
            inputs.append(options['section'])
            sigma = parse_section(options['section'], ext.base.dim, ext.module_dim)
        omega1, omega2 = extract_cocycle(ext, sigma)
        rep = induced_representation(ext, sigma)
        consistent = rep == ext.rep and cocycle_class_equal(ext, canonical, sigma)
        results = {
            'section': sigma,
            'representation': rep,
            'omega1': omega1,
            'omega2': omega2,
            'consistent_with_input': consistent,
        }
        return inputs, consistent, results

    def handle_extension_classify(self, options):
        first = self._valid_extension(options['first'])
        second = self._valid_extension(options['second'])
        result = classify(first, second)
        return [options['first'], options['second']], result.isomorphic, {'classification': result}

    def handle_selftest(self, options):
        seed = settings.TRILIE_DEFAULT_SEED if options['seed'] is None else options['seed']
        results = run_selftest(seed)
        return [], all(r['passed'] for r in results), {'seed': seed, 'properties': results}
