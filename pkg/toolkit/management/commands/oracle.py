from core.exceptions import InputError
from oracle.utils import (
    brute_force_anchors,
    brute_force_is_k_linked,
    brute_force_linked,
    brute_force_vertex_connectivity,
    exact_median_order,
)
from toolkit.management.base import (
    NEGATIVE,
    OK,
    Outcome,
    TournamentCommand,
    add_terminal_arguments,
    resolve_terminals,
)
from toolkit.serializers import OrderingSerializer, PathSystemSerializer

MODES = ["linked", "k-linked", "anchors", "connectivity", "median"]


class Command(TournamentCommand):
    help = "Run one of the exhaustive oracles on a small tournament."

    def add_command_arguments(self, parser):
        parser.add_argument("mode", choices=MODES)
        add_terminal_arguments(parser)

    def run(self, T, **options):
        mode, budget = options["mode"], options.get("budget")

        if mode == "linked":
            X, Y = resolve_terminals(T, options)
            system = brute_force_linked(T, X, Y, budget=budget)
            document = {"linked": system is not None, "paths": PathSystemSerializer(system).data if system else None}
            return Outcome(document, f"{X} -> {Y}: {'linked' if system else 'not linked'}", OK if system else NEGATIVE)

        if mode == "k-linked":
            k = options.get("k")
            if not k:
                raise InputError("k-linked needs --k")
            holds = brute_force_is_k_linked(T, k, budget=budget)
            return Outcome({"k": k, "k_linked": holds}, f"{'is' if holds else 'is not'} {k}-linked", OK if holds else NEGATIVE)

        if mode == "anchors":
            A, B = resolve_terminals(T, options)
            holds = brute_force_anchors(T, A, B, budget=budget)
            return Outcome({"anchors": holds}, f"{A} {'anchors' if holds else 'does not anchor'} {B}", OK if holds else NEGATIVE)

        if mode == "connectivity":
            count = brute_force_vertex_connectivity(T, budget=budget)
            return Outcome({"connectivity": count}, f"connectivity {count}")

        order = exact_median_order(T, budget=budget)
        return Outcome({"ordering": OrderingSerializer(order).data}, f"median order with {order.forward_arcs} forward arcs")
