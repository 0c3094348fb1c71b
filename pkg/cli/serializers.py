"""JSON file formats for algebras, pairs, representations, cochains, deformations and extensions.

Files use 1-based basis indices and write every scalar as a string "p/q"
(or "p"); the domain objects use 0-based indices and ``Fraction``. Each
serializer parses with ``is_valid()`` + ``save()`` and renders a domain
object back through ``to_representation()``.
"""
from fractions import Fraction
import json

from rest_framework import serializers

from compatible.deformations import DeformationData
from compatible.pairs import CompatiblePair
from compatible.representations import CompatibleRepresentation
from core.linalg import Matrix
from core.multilinear import Cochain, PreCochain, admissible_keys, is_admissible
from core.utils import canonical_pair, format_scalar, parse_scalar, sort_with_sign
from extensions.abelian import AbelianExtension, Section, build_extension
from threelie.algebras import ThreeLieAlgebra
from threelie.representations import Representation


def located(path, message):
    """ValidationError nested along a field path such as ('rep', 'rho', 2, 'matrix')"""
    detail = [message]
    for key in reversed(path):
        detail = {key: detail}
    return serializers.ValidationError(detail)


def describe_errors(detail, prefix=''):
    """Flatten a ValidationError detail into 'field.path: message' lines"""
    if isinstance(detail, dict):
        lines = []
        for key, value in detail.items():
            name = f'{prefix}[{key}]' if isinstance(key, int) else (f'{prefix}.{key}' if prefix else str(key))
            lines.extend(describe_errors(value, name))
        return lines
    if isinstance(detail, list):
        lines = []
        for position, value in enumerate(detail):
            if isinstance(value, (dict, list)):
                lines.extend(describe_errors(value, f'{prefix}[{position}]'))
            else:
                lines.append(f'{prefix or "file"}: {value}')
        return lines
    return [f'{prefix or "file"}: {detail}']


class ScalarField(serializers.Field):
    """Exact rational written as "p/q", "p" or a JSON integer"""

    default_error_messages = {
        'invalid': 'Malformed rational: {reason}.',
    }

    def to_internal_value(self, data):
        if isinstance(data, float):
            self.fail('invalid', reason='floats are not exact, write "p/q"')
        try:
            return parse_scalar(data)
        except ValueError as exc:
            self.fail('invalid', reason=str(exc))

    def to_representation(self, value):
        return format_scalar(value)


def index_list(length, **kwargs):
    return serializers.ListField(
        child=serializers.IntegerField(min_value=1), min_length=length, max_length=length, **kwargs
    )


def matrix_field(**kwargs):
    return serializers.ListField(child=serializers.ListField(child=ScalarField()), **kwargs)


def render_matrix(matrix):
    return [[format_scalar(x) for x in row] for row in matrix.rows]


def render_vector(vector):
    return [format_scalar(x) for x in vector]


def build_matrix(rows, nrows, ncols, path):
    if len(rows) != nrows:
        raise located(path, f'expected {nrows} rows, got {len(rows)}')
    for position, row in enumerate(rows):
        if len(row) != ncols:
            raise located(path + (position,), f'expected {ncols} entries, got {len(row)}')
    return Matrix.from_rows(rows, ncols)


def _check_index(index, dim, path):
    if not 1 <= index <= dim:
        raise located(path, f'index {index} out of range for dimension {dim}')
    return index - 1


# Algebras and pairs

class BracketEntrySerializer(serializers.Serializer):
    triple = index_list(3)
    value = serializers.DictField(child=ScalarField())


def _bracket_entries(algebra):
    return [
        {
            'triple': [i + 1 for i in triple],
            'value': {str(k + 1): format_scalar(x) for k, x in enumerate(vector) if x},
        }
        for triple, vector in sorted(algebra.nonzero_brackets().items())
    ]


def build_algebra(dim, entries, path):
    """Canonicalize triples with sign absorption and reject repeats and duplicates"""
    table = {}
    for position, entry in enumerate(entries):
        where = path + (position, 'triple')
        triple = [_check_index(i, dim, where) for i in entry['triple']]
        sign, ordered = sort_with_sign(triple)
        if not sign:
            raise located(where, 'repeated index in a bracket triple')
        if ordered in table:
            raise located(where, f'duplicate entry for canonical triple {[i + 1 for i in ordered]}')
        vector = [Fraction(0)] * dim
        for key, scalar in entry['value'].items():
            try:
                index = int(key)
            except ValueError:
                raise located(path + (position, 'value', key), 'component keys must be basis indices') from None
            vector[_check_index(index, dim, path + (position, 'value', key))] = scalar
        table[ordered] = tuple(sign * x for x in vector)
    return ThreeLieAlgebra.from_brackets(dim, table)


class AlgebraSerializer(serializers.Serializer):
    dim = serializers.IntegerField(min_value=1)
    bracket = BracketEntrySerializer(many=True)

    def create(self, validated_data):
        return build_algebra(validated_data['dim'], validated_data['bracket'], ('bracket',))

    def to_representation(self, instance):
        return {'dim': instance.dim, 'bracket': _bracket_entries(instance)}


def build_pair(data, path=()):
    dim = data['dim']
    return CompatiblePair(
        dim,
        build_algebra(dim, data['bracket1'], path + ('bracket1',)),
        build_algebra(dim, data['bracket2'], path + ('bracket2',)),
    )


class PairSerializer(serializers.Serializer):
    dim = serializers.IntegerField(min_value=1)
    bracket1 = BracketEntrySerializer(many=True)
    bracket2 = BracketEntrySerializer(many=True)

    def create(self, validated_data):
        return build_pair(validated_data)

    def to_representation(self, instance):
        return {
            'dim': instance.dim,
            'bracket1': _bracket_entries(instance.bracket1),
            'bracket2': _bracket_entries(instance.bracket2),
        }


# Representations

class ActionEntrySerializer(serializers.Serializer):
    pair = index_list(2)
    matrix = matrix_field()


def build_action(base_dim, module_dim, entries, path):
    rho = {}
    for position, entry in enumerate(entries):
        where = path + (position, 'pair')
        a, b = (_check_index(i, base_dim, where) for i in entry['pair'])
        sign, pair = canonical_pair(a, b)
        if not sign:
            raise located(where, 'repeated index in a wedge pair')
        if pair in rho:
            raise located(where, f'duplicate entry for canonical pair {[i + 1 for i in pair]}')
        matrix = build_matrix(entry['matrix'], module_dim, module_dim, path + (position, 'matrix'))
        rho[pair] = matrix if sign == 1 else -matrix
    return Representation(base_dim, module_dim, rho)


def _action_entries(rep):
    return [
        {'pair': [a + 1, b + 1], 'matrix': render_matrix(matrix)}
        for (a, b), matrix in sorted(rep.rho.items())
    ]


class RepresentationSerializer(serializers.Serializer):
    """The file carries no base dimension; pass it as ``context['base_dim']``"""

    module_dim = serializers.IntegerField(min_value=0)
    rho = ActionEntrySerializer(many=True)

    def create(self, validated_data):
        return build_action(self.context['base_dim'], validated_data['module_dim'], validated_data['rho'], ('rho',))

    def to_representation(self, instance):
        return {'module_dim': instance.module_dim, 'rho': _action_entries(instance)}


def build_compatible_representation(base_dim, data, path=()):
    m = data['module_dim']
    return CompatibleRepresentation(
        build_action(base_dim, m, data['rho'], path + ('rho',)),
        build_action(base_dim, m, data['mu'], path + ('mu',)),
    )


class CompatibleRepresentationSerializer(serializers.Serializer):
    module_dim = serializers.IntegerField(min_value=0)
    rho = ActionEntrySerializer(many=True)
    mu = ActionEntrySerializer(many=True)

    def create(self, validated_data):
        return build_compatible_representation(self.context['base_dim'], validated_data)

    def to_representation(self, instance):
        return {
            'module_dim': instance.module_dim,
            'rho': _action_entries(instance.rho),
            'mu': _action_entries(instance.mu),
        }


# Cochains

class CochainEntrySerializer(serializers.Serializer):
    pairs = serializers.ListField(child=index_list(2), allow_empty=True)
    final = serializers.IntegerField(min_value=1, required=False)
    triple = index_list(3, required=False)
    value = serializers.ListField(child=ScalarField())

    def validate(self, attrs):
        if ('final' in attrs) == ('triple' in attrs):
            raise serializers.ValidationError('an entry has exactly one of "final" and "triple"')
        return attrs


def _canonical_slots(pairs, dim, path):
    sign = 1
    slots = []
    for position, (a, b) in enumerate(pairs):
        where = path + (position,)
        s, pair = canonical_pair(_check_index(a, dim, where), _check_index(b, dim, where))
        if not s:
            raise located(where, 'repeated index in a wedge pair')
        sign *= s
        slots.append(pair)
    return sign, tuple(slots)


def build_cochain(data, path=()):
    """Cochain when the entries are admissible, PreCochain otherwise"""
    weight, d, m = data['weight'], data['ambient_dim'], data['target_dim']
    entries = data['entries']
    admissible_form = [('triple' in entry) for entry in entries]
    if any(admissible_form) and not all(admissible_form):
        raise located(path + ('entries',), 'entries mix the "final" and "triple" forms')
    values = {}
    for position, entry in enumerate(entries):
        where = path + ('entries', position)
        if len(entry['value']) != m:
            raise located(where + ('value',), f'expected {m} components, got {len(entry["value"])}')
        if 'triple' in entry:
            if weight == 0:
                raise located(where + ('triple',), 'weight-0 entries use "final"')
            if len(entry['pairs']) != weight - 1:
                raise located(where + ('pairs',), f'an admissible entry of weight {weight} has {weight - 1} pairs')
            sign, slots = _canonical_slots(entry['pairs'], d, where + ('pairs',))
            triple = [_check_index(i, d, where + ('triple',)) for i in entry['triple']]
            s, tail = sort_with_sign(triple)
            if not s:
                raise located(where + ('triple',), 'repeated index in a triple')
            sign *= s
        else:
            if len(entry['pairs']) != weight:
                raise located(where + ('pairs',), f'an entry of weight {weight} has {weight} pairs')
            sign, slots = _canonical_slots(entry['pairs'], d, where + ('pairs',))
            tail = _check_index(entry['final'], d, where + ('final',))
        if (slots, tail) in values:
            raise located(where, 'duplicate entry for a canonical key')
        values[(slots, tail)] = tuple(sign * x for x in entry['value'])
    if all(admissible_form) and weight > 0:
        return Cochain.from_admissible(weight, d, m, values)
    raw = PreCochain(weight, d, m, values)
    return raw.admissible() if is_admissible(raw)[0] else raw


def _cochain_entries(cochain):
    if isinstance(cochain, Cochain) and cochain.weight > 0:
        entries = []
        for key in admissible_keys(cochain.weight, cochain.ambient_dim):
            value = cochain.admissible_value(key)
            if any(value):
                slots, triple = key
                entries.append({
                    'pairs': [[a + 1, b + 1] for a, b in slots],
                    'triple': [i + 1 for i in triple],
                    'value': render_vector(value),
                })
        return entries
    return [
        {'pairs': [[a + 1, b + 1] for a, b in slots], 'final': final + 1, 'value': render_vector(value)}
        for (slots, final), value in sorted(cochain.values.items())
    ]


class CochainSerializer(serializers.Serializer):
    weight = serializers.IntegerField(min_value=0)
    ambient_dim = serializers.IntegerField(min_value=1)
    target_dim = serializers.IntegerField(min_value=1)
    entries = CochainEntrySerializer(many=True)

    def create(self, validated_data):
        return build_cochain(validated_data)

    def to_representation(self, instance):
        return {
            'weight': instance.weight,
            'ambient_dim': instance.ambient_dim,
            'target_dim': instance.target_dim,
            'entries': _cochain_entries(instance),
        }


# Deformations

def _structure_cochain(data, path, dim=None, target_dim=None):
    """A weight-1 admissible cochain, located errors otherwise"""
    cochain = build_cochain(data, path)
    if cochain.weight != 1:
        raise located(path + ('weight',), 'expected a weight-1 cochain')
    if not isinstance(cochain, Cochain):
        raise located(path + ('entries',), 'the cochain is not skew-symmetric in its three arguments')
    if dim is not None and cochain.ambient_dim != dim:
        raise located(path + ('ambient_dim',), f'expected ambient dimension {dim}')
    expected_target = cochain.ambient_dim if target_dim is None else target_dim
    if cochain.target_dim != expected_target:
        raise located(path + ('target_dim',), f'expected target dimension {expected_target}')
    return cochain


class DeformationSerializer(serializers.Serializer):
    omega1 = CochainSerializer()
    omega2 = CochainSerializer()
    omega1_tilde = CochainSerializer(required=False)
    omega2_tilde = CochainSerializer(required=False)

    def create(self, validated_data):
        omega1 = _structure_cochain(validated_data['omega1'], ('omega1',))
        dim = omega1.ambient_dim
        cochains = {'omega1': omega1}
        for name in ('omega2', 'omega1_tilde', 'omega2_tilde'):
            if name in validated_data:
                cochains[name] = _structure_cochain(validated_data[name], (name,), dim)
        return DeformationData(**cochains)

    def to_representation(self, instance):
        data = {
            'omega1': CochainSerializer(instance.omega1).data,
            'omega2': CochainSerializer(instance.omega2).data,
        }
        for name in ('omega1_tilde', 'omega2_tilde'):
            if getattr(instance, name) is not None:
                data[name] = CochainSerializer(getattr(instance, name)).data
        return data


# Operators and sections

class OperatorSerializer(serializers.Serializer):
    dim = serializers.IntegerField(min_value=1)
    matrix = matrix_field()

    def create(self, validated_data):
        dim = validated_data['dim']
        return build_matrix(validated_data['matrix'], dim, dim, ('matrix',))

    def to_representation(self, instance):
        return {'dim': instance.nrows, 'matrix': render_matrix(instance)}


class SectionSerializer(serializers.Serializer):
    """σ(x) = (x, τx); needs ``context['base_dim']`` and ``context['module_dim']``"""

    tau = matrix_field(allow_empty=True)

    def create(self, validated_data):
        tau = build_matrix(validated_data['tau'], self.context['module_dim'], self.context['base_dim'], ('tau',))
        return Section.from_tau(tau)

    def to_representation(self, instance):
        return {'tau': render_matrix(instance.tau)}


# Extensions

class ExtensionSerializer(serializers.Serializer):
    base = PairSerializer()
    rep = CompatibleRepresentationSerializer()
    omega1 = CochainSerializer()
    omega2 = CochainSerializer()

    def create(self, validated_data):
        """The extension together with its cocycle verdict (``ExtensionResult``)"""
        base = build_pair(validated_data['base'], ('base',))
        rep = build_compatible_representation(base.dim, validated_data['rep'], ('rep',))
        omegas = [
            _structure_cochain(validated_data[name], (name,), base.dim, rep.module_dim)
            for name in ('omega1', 'omega2')
        ]
        return build_extension(base, rep, *omegas)

    def to_representation(self, instance):
        return {
            'base': PairSerializer(instance.base).data,
            'rep': CompatibleRepresentationSerializer(instance.rep).data,
            'omega1': CochainSerializer(instance.omega1).data,
            'omega2': CochainSerializer(instance.omega2).data,
        }


# Files

def _reject_duplicate_keys(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise serializers.ValidationError({'file': [f'duplicate key "{key}"']})
        seen[key] = value
    return seen


def load_document(path):
    try:
        with open(path, encoding='utf-8') as handle:
            return json.load(handle, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise serializers.ValidationError({'file': [f'line {exc.lineno} column {exc.colno}: {exc.msg}']}) from None


def dump_document(data):
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + '\n'


def write_document(data, path):
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(dump_document(data))


def parse_data(serializer_class, data, **context):
    serializer = serializer_class(data=data, context=context)
    serializer.is_valid(raise_exception=True)
    return serializer.save()


def parse_algebra(path):
    return parse_data(AlgebraSerializer, load_document(path))


def parse_pair(path):
    return parse_data(PairSerializer, load_document(path))


def parse_structure(path):
    """An algebra file or a compatible-pair file, told apart by their keys"""
    document = load_document(path)
    if isinstance(document, dict) and 'bracket1' in document:
        return parse_data(PairSerializer, document)
    return parse_data(AlgebraSerializer, document)


def parse_rep(path, base_dim):
    return parse_data(RepresentationSerializer, load_document(path), base_dim=base_dim)


def parse_compatible_rep(path, base_dim):
    return parse_data(CompatibleRepresentationSerializer, load_document(path), base_dim=base_dim)


def parse_coefficients(path, base_dim):
    """A representation file, or a compatible one when it carries "mu" """
    document = load_document(path)
    if isinstance(document, dict) and 'mu' in document:
        return parse_data(CompatibleRepresentationSerializer, document, base_dim=base_dim)
    return parse_data(RepresentationSerializer, document, base_dim=base_dim)


def parse_cochain(path):
    return parse_data(CochainSerializer, load_document(path))


def parse_deformation(path):
    return parse_data(DeformationSerializer, load_document(path))


def parse_operator(path):
    return parse_data(OperatorSerializer, load_document(path))


def parse_section(path, base_dim, module_dim):
    return parse_data(SectionSerializer, load_document(path), base_dim=base_dim, module_dim=module_dim)


def parse_extension(path):
    return parse_data(ExtensionSerializer, load_document(path))


SERIALIZERS = (
    (ThreeLieAlgebra, AlgebraSerializer),
    (CompatiblePair, PairSerializer),
    (Representation, RepresentationSerializer),
    (CompatibleRepresentation, CompatibleRepresentationSerializer),
    (PreCochain, CochainSerializer),
    (DeformationData, DeformationSerializer),
    (Matrix, OperatorSerializer),
    (Section, SectionSerializer),
    (AbelianExtension, ExtensionSerializer),
)


def serialize(instance):
    """File-format data for any domain object with a file format"""
    for kind, serializer_class in SERIALIZERS:
        if isinstance(instance, kind):
            return serializer_class(instance).data
    raise TypeError(f'no file format for {type(instance).__name__}')
