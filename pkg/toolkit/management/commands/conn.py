from core.exceptions import InputError
from core.utils import members
from flow.utils import is_k_connected, local_connectivity, vertex_connectivity
from oracle.utils import brute_force_vertex_connectivity
from toolkit.forms import parse_vertex_list
from toolkit.management.base import INTERNAL_ERROR, NEGATIVE, OK, Outcome, TournamentCommand
from toolkit.serializers import ConnectivityResultSerializer


class Command(TournamentCommand):
    help = "Vertex connectivity, local connectivity of a pair, or a k-connectivity test."

    def add_command_arguments(self, parser):
        parser.add_argument("--at-least", type=int, help="Only test whether the tournament is this connected")
        parser.add_argument("--pair", help="x,y: count internally disjoint x -> y dipaths")

    def run(self, T, **options):
        if options.get("at_least") is not None:
            k = options["at_least"]
            holds = is_k_connected(T, k)
            summary = f"{'is' if holds else 'is not'} {k}-connected"
            return Outcome({"k": k, "k_connected": holds}, summary, OK if holds else NEGATIVE)

        if options.get("pair"):
            pair = parse_vertex_list(options["pair"])
            if len(pair) != 2:
                raise InputError(f"--pair needs exactly two vertices, got {pair}")
            result = local_connectivity(T, *pair)
        else:
            result = vertex_connectivity(T)

        document = ConnectivityResultSerializer(result).data
        code = OK
        if options["verify"] and not options.get("pair"):
            expected = brute_force_vertex_connectivity(T, budget=options.get("budget"))
            document = {**document, "exhaustive": expected}
            code = OK if expected == result.count else INTERNAL_ERROR

        separator = members(result.separator) if result.separator is not None else None
        return Outcome(document, f"connectivity {result.count}, separator {separator}", code)
