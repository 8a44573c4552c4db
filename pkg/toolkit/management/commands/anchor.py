from anchor.utils import check_pi, find_anchored_candidate, route_all_permutations, route_with_escalation
from oracle.utils import validate_path_system
from toolkit.forms import parse_vertex_list
from toolkit.management.base import INTERNAL_ERROR, OK, Outcome, TournamentCommand
from toolkit.serializers import AnchorCertificateSerializer, PathSystemSerializer, ViolationSerializer


class Command(TournamentCommand):
    help = "Build an anchored pair and route one or every permutation through it."

    def add_command_arguments(self, parser):
        parser.add_argument("--k", type=int, required=True)
        parser.add_argument("--threshold", type=int, help="Minimum n accepted for the anchoring lemma")
        parser.add_argument("--permutation", help="Comma-separated permutation of 0..k-1 (default: all)")

    def run(self, T, **options):
        k = options["k"]
        cert = find_anchored_candidate(T, k, threshold=options.get("threshold"))
        if options.get("permutation"):
            pi = check_pi(parse_vertex_list(options["permutation"]), k)
            system, final, escalations = route_with_escalation(T, cert, pi)
            systems = [system]
        else:
            final, systems = route_all_permutations(T, cert)
            escalations = int(final is not cert)

        document = {
            "certificate": AnchorCertificateSerializer(final).data,
            "escalations": escalations,
            "systems": PathSystemSerializer(systems, many=True).data,
        }
        code = OK
        if options["verify"]:
            violations = []
            for system in systems:
                expected = [(final.A[i], final.B[j]) for i, j in sorted(system.permutation.items())]
                violations += validate_path_system(T, expected, system)
            document["violations"] = ViolationSerializer(violations, many=True).data
            code = INTERNAL_ERROR if violations else OK

        summary = f"{final.kind} certificate A={final.A} B={final.B}; {len(systems)} routed permutation(s)"
        return Outcome(document, summary, code)
