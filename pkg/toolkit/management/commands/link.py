from linker.structures import LinkOptions
from linker.utils import link
from oracle.utils import validate_path_system
from toolkit.management.base import (
    INTERNAL_ERROR,
    OK,
    Outcome,
    TournamentCommand,
    add_terminal_arguments,
    resolve_terminals,
)
from toolkit.serializers import LinkerTraceSerializer, PathSystemSerializer, ViolationSerializer


class Command(TournamentCommand):
    help = "Link x_i to y_i by vertex-disjoint dipaths."

    def add_command_arguments(self, parser):
        add_terminal_arguments(parser)

    def run(self, T, **options):
        X0, Y0 = resolve_terminals(T, options)
        # None lets the linker decide by size
        system, trace = link(T, X0, Y0, LinkOptions(check_hypotheses=options["check_hypotheses"]))

        document = {
            "paths": PathSystemSerializer(system).data,
            "trace": LinkerTraceSerializer(trace).data,
        }
        code = OK
        if options["verify"]:
            violations = validate_path_system(T, list(zip(X0, Y0)), system)
            document["violations"] = ViolationSerializer(violations, many=True).data
            code = INTERNAL_ERROR if violations else OK

        summary = "\n".join(" -> ".join(map(str, path)) for path in system.paths)
        return Outcome(document, summary, code)
