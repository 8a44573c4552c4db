from rest_framework import serializers
from rest_framework.renderers import JSONRenderer

from core.structures import Dipath
from core.utils import members, vertex_set
from flow.structures import PathSystem


class VertexSetField(serializers.Field):
    """A bitmask VertexSet, written as the ascending list of its vertices."""

    def to_representation(self, value):
        return list(members(value))

    def to_internal_value(self, data):
        if not isinstance(data, list) or not all(isinstance(v, int) and v >= 0 for v in data):
            raise serializers.ValidationError("Expected a list of vertex ids.")
        return vertex_set(data)


def vertex_list(**kwargs):
    return serializers.ListField(child=serializers.IntegerField(min_value=0), **kwargs)


class PathSystemSerializer(serializers.Serializer):
    pairs = serializers.ListField(child=vertex_list(min_length=2, max_length=2))
    paths = serializers.ListField(child=vertex_list(min_length=1))
    permutation = serializers.DictField(child=serializers.IntegerField(min_value=0), required=False, allow_null=True)

    def validate(self, attrs):
        if len(attrs["pairs"]) != len(attrs["paths"]):
            raise serializers.ValidationError("pairs and paths differ in length.")
        for path in attrs["paths"]:
            if len(set(path)) != len(path):
                raise serializers.ValidationError(f"path {path} repeats a vertex.")
        return attrs

    def create(self, validated_data):
        permutation = validated_data.get("permutation")
        if permutation is not None:
            permutation = {int(i): j for i, j in permutation.items()}
        return PathSystem(
            pairs=tuple(tuple(pair) for pair in validated_data["pairs"]),
            paths=tuple(Dipath(tuple(path)) for path in validated_data["paths"]),
            permutation=permutation,
        )


class ViolationSerializer(serializers.Serializer):
    kind = serializers.CharField()
    detail = serializers.CharField()


class OrderingSerializer(serializers.Serializer):
    perm = vertex_list()
    forward_arcs = serializers.IntegerField()


class IntervalViolationSerializer(serializers.Serializer):
    i = serializers.IntegerField()
    j = serializers.IntegerField()
    clause = serializers.CharField()
    count = serializers.IntegerField()
    required = serializers.IntegerField()


class AnchorCertificateSerializer(serializers.Serializer):
    kind = serializers.CharField()
    A = vertex_list()
    B = vertex_list()
    Z = vertex_list()
    threshold = serializers.IntegerField(allow_null=True)
    ordering = OrderingSerializer(allow_null=True)


class ConnectivityResultSerializer(serializers.Serializer):
    count = serializers.IntegerField()
    separator = VertexSetField(allow_null=True)
    pair = vertex_list(allow_null=True)


class PeelRecordSerializer(serializers.Serializer):
    i = serializers.IntegerField()
    u = serializers.IntegerField()
    v = serializers.IntegerField()
    A = VertexSetField()
    degree = serializers.IntegerField()


class LinkerTraceSerializer(serializers.Serializer):
    k = serializers.IntegerField()
    k_star = serializers.IntegerField()
    X0 = vertex_list()
    Y0 = vertex_list()
    hypotheses = serializers.JSONField(allow_null=True)
    peels = PeelRecordSerializer(many=True)
    U = VertexSetField()
    V = VertexSetField()
    certificate = AnchorCertificateSerializer(allow_null=True)
    alpha = vertex_list()
    beta = vertex_list()
    X1 = vertex_list()
    d = serializers.IntegerField()
    s = serializers.IntegerField()
    relabel = vertex_list()
    assignment = vertex_list()
    second_successors = serializers.DictField(child=serializers.IntegerField())
    Q = serializers.ListField(child=vertex_list())
    B_set = VertexSetField()
    menger = PathSystemSerializer(allow_null=True)
    anchor_paths = PathSystemSerializer(allow_null=True)
    escalations = serializers.IntegerField()
    notes = serializers.ListField(child=serializers.CharField())


def render(document) -> str:
    return JSONRenderer().render(document).decode()
