from io import StringIO
import json
import os
import tempfile

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings
from rest_framework import serializers

from .reports import render_report
from .selftest import run_selftest
from .serializers import (
    AlgebraSerializer, CochainSerializer, PairSerializer, describe_errors, load_document, parse_compatible_rep,
    parse_data, parse_deformation, parse_extension, parse_pair, parse_structure, serialize,
)


def corpus(name):
    return str(settings.TRILIE_CORPUS_DIR / name)


def run(*args):
    """(exit status, stdout) of ``manage.py trilie`` with the given arguments"""
    out = StringIO()
    try:
        call_command('trilie', *args, stdout=out)
        status = 0
    except SystemExit as exc:
        status = exc.code
    return status, out.getvalue()


def run_json(*args):
    status, output = run(*args, '--json')
    return status, json.loads(output)


def errors_of(serializer_class, data, **context):
    try:
        parse_data(serializer_class, data, **context)
    except serializers.ValidationError as exc:
        return describe_errors(exc.detail)
    raise AssertionError('the data was accepted')


class ParsingTests(SimpleTestCase):
    def test_unsorted_triple_absorbs_the_sign(self):
        algebra = parse_structure(corpus('unsorted.algebra.json'))
        self.assertEqual(algebra.bracket(0, 1, 2), (-1, 0, 0))

    def test_bad_denominator_is_located(self):
        document = load_document(corpus('bad_denominator.algebra.json'))
        lines = errors_of(AlgebraSerializer, document)
        self.assertEqual(len(lines), 1)
        self.assertTrue(lines[0].startswith('bracket[0].value.1: '))

    def test_floats_are_rejected(self):
        lines = errors_of(AlgebraSerializer, {'dim': 3, 'bracket': [{'triple': [1, 2, 3], 'value': {'1': 1.5}}]})
        self.assertTrue(lines[0].startswith('bracket[0].value.1: '))

    def test_duplicate_canonical_triple(self):
        lines = errors_of(AlgebraSerializer, {
            'dim': 3,
            'bracket': [
                {'triple': [1, 2, 3], 'value': {'1': '1'}},
                {'triple': [2, 1, 3], 'value': {'1': '1'}},
            ],
        })
        self.assertTrue(lines[0].startswith('bracket[1].triple: duplicate'))

    def test_out_of_range_and_repeated_indices(self):
        out_of_range = errors_of(AlgebraSerializer, {'dim': 3, 'bracket': [{'triple': [1, 2, 4], 'value': {}}]})
        self.assertIn('out of range', out_of_range[0])
        repeated = errors_of(AlgebraSerializer, {'dim': 3, 'bracket': [{'triple': [1, 1, 2], 'value': {}}]})
        self.assertIn('repeated index', repeated[0])

    def test_pair_needs_both_brackets(self):
        lines = errors_of(PairSerializer, {'dim': 3, 'bracket1': []})
        self.assertTrue(any(line.startswith('bracket2: ') for line in lines))

    def test_cochain_entry_forms_are_exclusive(self):
        lines = errors_of(CochainSerializer, {
            'weight': 1, 'ambient_dim': 3, 'target_dim': 3,
            'entries': [{'pairs': [[1, 2]], 'final': 3, 'triple': [1, 2, 3], 'value': ['1', '0', '0']}],
        })
        self.assertTrue(lines[0].startswith('entries[0]'))

    def test_duplicate_json_keys(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'twice.json')
            with open(path, 'w', encoding='utf-8') as handle:
                handle.write('{"dim": 3, "dim": 4, "bracket": []}')
            with self.assertRaises(serializers.ValidationError):
                load_document(path)

    def test_malformed_json_reports_position(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'broken.json')
            with open(path, 'w', encoding='utf-8') as handle:
                handle.write('{"dim": 3,\n  "bracket": [}')
            with self.assertRaises(serializers.ValidationError) as raised:
                load_document(path)
            self.assertIn('line 2', describe_errors(raised.exception.detail)[0])


class FormatRoundTripTests(SimpleTestCase):
    def test_pair(self):
        path = corpus('example25.pair.json')
        self.assertEqual(serialize(parse_pair(path)), load_document(path))

    def test_compatible_representation(self):
        path = corpus('example25.coadjoint.rep.json')
        self.assertEqual(serialize(parse_compatible_rep(path, 4)), load_document(path))

    def test_deformation_with_tildes(self):
        path = corpus('example25.order2.deformation.json')
        self.assertEqual(serialize(parse_deformation(path)), load_document(path))

    def test_extension(self):
        path = corpus('abelian3.extension.json')
        self.assertEqual(serialize(parse_extension(path).extension), load_document(path))

    def test_raw_cochain_keeps_the_final_form(self):
        document = {
            'weight': 1, 'ambient_dim': 3, 'target_dim': 3,
            'entries': [{'pairs': [[1, 2]], 'final': 3, 'value': ['1/2', '0', '0']}],
        }
        cochain = parse_data(CochainSerializer, document)
        self.assertEqual(serialize(cochain), document)

    def test_admissible_cochain_in_final_form_is_written_as_triples(self):
        document = {
            'weight': 1, 'ambient_dim': 3, 'target_dim': 1,
            'entries': [
                {'pairs': [[1, 2]], 'final': 3, 'value': ['2']},
                {'pairs': [[1, 3]], 'final': 2, 'value': ['-2']},
                {'pairs': [[2, 3]], 'final': 1, 'value': ['2']},
            ],
        }
        cochain = parse_data(CochainSerializer, document)
        self.assertEqual(
            serialize(cochain)['entries'],
            [{'pairs': [], 'triple': [1, 2, 3], 'value': ['2']}],
        )


class CommandTests(SimpleTestCase):
    def test_validate_compatible_pair(self):
        status, report = run_json('validate', corpus('example25.pair.json'))
        self.assertEqual(status, 0)
        self.assertTrue(report['verdict'])
        self.assertEqual(report['verb'], 'validate')
        self.assertEqual(report['results']['kind'], 'compatible pair')
        self.assertTrue(report['results']['maurer_cartan']['ok'])
        self.assertEqual(len(report['inputs'][0]['sha256']), 64)

    def test_validate_noncompatible_pair(self):
        status, report = run_json('validate', corpus('noncompatible.pair.json'), '--grid', 'random', '--seed', '5')
        self.assertEqual(status, 1)
        self.assertEqual(
            report['results']['maurer_cartan'],
            {'first': True, 'mixed': False, 'second': True, 'ok': False},
        )

    def test_validate_reports_the_failing_tuple(self):
        status, report = run_json('validate', corpus('fi_violating.algebra.json'))
        self.assertEqual(status, 1)
        violations = report['results']['fundamental_identity']['violations']
        located = [v for v in violations if v['where'] == [2, 3, 1, 2, 4]]
        self.assertEqual(len(located), 1)
        self.assertEqual(located[0]['lhs'], ['0', '0', '0', '0'])
        self.assertEqual(located[0]['rhs'], ['0', '1', '0', '0'])

    def test_validate_with_coefficients(self):
        status, report = run_json(
            'validate', corpus('example25.pair.json'), '--coeffs', corpus('example25.coadjoint.rep.json'),
        )
        self.assertEqual(status, 0)
        self.assertTrue(report['results']['representation']['ok'])
        self.assertEqual(len(report['inputs']), 2)

    def test_text_report(self):
        status, output = run('validate', corpus('d3.algebra.json'))
        self.assertEqual(status, 0)
        self.assertIn('verdict: true', output)

    def test_cohomology_of_abelian_pair(self):
        status, report = run_json('cohomology', corpus('abelian3.pair.json'), '--degree', '2')
        self.assertEqual(status, 0)
        self.assertEqual(report['results']['dimensions'], {'H1': 9, 'H2': 6})
        self.assertEqual(report['results']['coefficients'], 'self')

    def test_derivations(self):
        status, report = run_json('derivations', corpus('abelian3.pair.json'))
        self.assertEqual(status, 0)
        self.assertEqual(report['results']['dimension'], 9)

    def test_mc_check(self):
        self.assertEqual(run('mc-check', corpus('example25.pair.json'))[0], 0)
        self.assertEqual(run('mc-check', corpus('noncompatible.pair.json'))[0], 1)

    def test_deform_check(self):
        status, _ = run('deform-check', corpus('example25.pair.json'), corpus('example25.deformation.json'))
        self.assertEqual(status, 0)

    def test_deform_equivalent_gives_a_witness(self):
        status, report = run_json(
            'deform-equivalent', corpus('example25.pair.json'),
            corpus('example25.deformation.json'), corpus('example25.shifted.deformation.json'),
        )
        self.assertEqual(status, 0)
        equivalence = report['results']['equivalence']
        self.assertTrue(equivalence['equivalent'])
        self.assertEqual(len(equivalence['witness']), 4)
        self.assertIsNone(equivalence['certificate'])

    def test_nijenhuis_operator_on_a_pair(self):
        status, report = run_json('nijenhuis', corpus('example25.pair.json'), corpus('example25.nijenhuis.json'))
        self.assertEqual(status, 0)
        self.assertEqual(report['results']['deformed_pair']['bracket1'], [{'triple': [1, 2, 3], 'value': {'1': '6'}}])
        self.assertEqual(report['results']['deformed_pair']['bracket2'], [{'triple': [2, 3, 4], 'value': {'1': '15'}}])

    def test_operator_that_is_not_nijenhuis(self):
        status, report = run_json('nijenhuis', corpus('example25.pair.json'), corpus('example25.not_nijenhuis.json'))
        self.assertEqual(status, 1)
        self.assertTrue(report['results']['nijenhuis']['bracket1_nijenhuis'])
        self.assertFalse(report['results']['nijenhuis']['bracket2_nijenhuis'])

    def test_nijenhuis_operator_on_an_algebra(self):
        status, report = run_json('nijenhuis', corpus('d3.algebra.json'), corpus('d3.nijenhuis.json'))
        self.assertEqual(status, 0)
        self.assertTrue(report['results']['nijenhuis'])
        self.assertEqual(report['results']['torsion']['entries'], [])

    def test_order2_with_evaluation(self):
        status, report = run_json(
            'deform-order2', corpus('example25.pair.json'), corpus('example25.order2.deformation.json'), '--evaluate',
        )
        self.assertEqual(status, 0)
        self.assertTrue(report['results']['by_evaluation'])

    def test_extension_build_and_extract(self):
        status, report = run_json('extension-build', corpus('abelian3.extension.json'))
        self.assertEqual(status, 0)
        self.assertEqual(report['results']['total']['dim'], 4)
        status, report = run_json(
            'extension-extract', corpus('abelian3.extension.json'), '--section', corpus('abelian3.section.json'),
        )
        self.assertEqual(status, 0)
        self.assertTrue(report['results']['consistent_with_input'])

    def test_extension_classify(self):
        status, report = run_json(
            'extension-classify', corpus('abelian3.extension.json'), corpus('abelian3.trivial.extension.json'),
        )
        self.assertEqual(status, 1)
        self.assertFalse(report['results']['classification']['isomorphic'])
        self.assertIsNotNone(report['results']['classification']['certificate'])

    def test_self_coefficient_extension(self):
        status, _ = run('extension-build', corpus('example25.adjoint.extension.json'))
        self.assertEqual(status, 0)

    def test_invalid_input_exits_with_two(self):
        with self.assertRaises(CommandError) as raised:
            run('validate', corpus('bad_denominator.algebra.json'))
        self.assertEqual(raised.exception.returncode, 2)
        self.assertIn('bracket[0].value.1', str(raised.exception))

    def test_missing_file_exits_with_two(self):
        with self.assertRaises(CommandError) as raised:
            run('validate', corpus('no_such.pair.json'))
        self.assertEqual(raised.exception.returncode, 2)

    @override_settings(TRILIE_MAX_DEGREE=1)
    def test_degree_bound(self):
        with self.assertRaises(CommandError) as raised:
            run('cohomology', corpus('abelian3.pair.json'), '--degree', '2')
        self.assertEqual(raised.exception.returncode, 2)
        self.assertIn('TRILIE_MAX_DEGREE', str(raised.exception))

    def test_reports_are_deterministic(self):
        first = run('validate', corpus('example25.pair.json'), '--json')
        second = run('validate', corpus('example25.pair.json'), '--json')
        self.assertEqual(first, second)

    def test_render_report_text_form(self):
        report = {'verb': 'x', 'verdict': False, 'results': {'values': ['1/2', '3'], 'empty': []}}
        self.assertEqual(
            render_report(report),
            'results:\n  empty: []\n  values: [1/2, 3]\nverb: x\nverdict: false',
        )


class SelftestTests(SimpleTestCase):
    def test_every_property_holds(self):
        results = run_selftest()
        self.assertEqual(len(results), 6)
        for result in results:
            self.assertTrue(result['passed'], f"{result['property']}: {result['detail']}")

    def test_selftest_verb(self):
        status, report = run_json('selftest', '--seed', '11')
        self.assertEqual(status, 0)
        self.assertEqual(report['results']['seed'], 11)
