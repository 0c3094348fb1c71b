"""Deterministic reports: every scalar an exact string, every basis index 1-based."""
from fractions import Fraction

from compatible.deformations import EquivalenceResult
from compatible.pairs import MaurerCartanVerdict
from core.linalg import Matrix
from core.utils import file_digest, format_scalar
from core.verdicts import Verdict, Violation
from extensions.abelian import ClassificationResult
from threelie.cohomology import CochainComplexReport

from .serializers import SERIALIZERS, dump_document, render_matrix, render_vector, serialize


def render_violation(violation):
    return {
        'label': violation.label,
        'where': [i + 1 for i in violation.where],
        'lhs': render_vector(violation.lhs),
        'rhs': render_vector(violation.rhs),
    }


def render_verdict(verdict):
    data = {'ok': verdict.ok, 'violations': [render_violation(v) for v in verdict.violations]}
    data.update({key: render(value) for key, value in verdict.details.items()})
    return data


def render(value):
    """Report data for any result value the library returns"""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return format_scalar(value)
    if isinstance(value, Matrix):
        return render_matrix(value)
    if isinstance(value, Violation):
        return render_violation(value)
    if isinstance(value, Verdict):
        return render_verdict(value)
    if isinstance(value, MaurerCartanVerdict):
        return {'first': value.first, 'mixed': value.mixed, 'second': value.second, 'ok': value.ok}
    if isinstance(value, CochainComplexReport):
        return value.as_dict()
    if isinstance(value, EquivalenceResult):
        return {
            'equivalent': value.equivalent,
            'witness': render(value.witness),
            'certificate': render(value.certificate),
        }
    if isinstance(value, ClassificationResult):
        return {
            'isomorphic': value.isomorphic,
            'tau': render(value.tau),
            'certificate': render(value.certificate),
        }
    if any(isinstance(value, kind) for kind, _ in SERIALIZERS):
        return serialize(value)
    if isinstance(value, dict):
        return {str(key): render(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [render(item) for item in value]
    raise TypeError(f'cannot report a {type(value).__name__}')


def build_report(verb, inputs, verdict, results):
    return {
        'verb': verb,
        'inputs': [{'path': str(path), 'sha256': file_digest(path)} for path in inputs],
        'verdict': verdict,
        'results': render(results),
    }


def _is_leaf(value):
    return not isinstance(value, (dict, list))


def _text_lines(value, indent):
    pad = '  ' * indent
    lines = []
    if isinstance(value, dict):
        for key in sorted(value):
            item = value[key]
            if _is_leaf(item) or (isinstance(item, list) and all(_is_leaf(x) for x in item)):
                lines.append(f'{pad}{key}: {_leaf_text(item)}')
            else:
                lines.append(f'{pad}{key}:')
                lines.extend(_text_lines(item, indent + 1))
    elif isinstance(value, list):
        if not value:
            lines.append(f'{pad}(none)')
        for item in value:
            if _is_leaf(item) or (isinstance(item, list) and all(_is_leaf(x) for x in item)):
                lines.append(f'{pad}- {_leaf_text(item)}')
            else:
                lines.append(f'{pad}-')
                lines.extend(_text_lines(item, indent + 1))
    else:
        lines.append(f'{pad}{_leaf_text(value)}')
    return lines


def _leaf_text(value):
    if isinstance(value, list):
        return '[' + ', '.join(_leaf_text(x) for x in value) + ']'
    if value is None:
        return 'null'
    if isinstance(value, bool):
        return 'true' if value else 'false'
    return str(value)


def render_report(report, as_json=False):
    if as_json:
        return dump_document(report).rstrip('\n')
    return '\n'.join(_text_lines(report, 0))
