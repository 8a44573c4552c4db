from oracle.utils import exact_median_order
from ordering.utils import check_interval_domination, local_median_order
from toolkit.management.base import NEGATIVE, OK, Outcome, TournamentCommand
from toolkit.serializers import IntervalViolationSerializer, OrderingSerializer


class Command(TournamentCommand):
    help = "Compute a local median order and check its interval-domination property."

    def add_command_arguments(self, parser):
        parser.add_argument("--exact", action="store_true", help="Use the exact (exponential) median order")

    def run(self, T, **options):
        if options["exact"]:
            order = exact_median_order(T, budget=options.get("budget"))
        else:
            order = local_median_order(T)
        violations = check_interval_domination(T, order)
        document = {
            "ordering": OrderingSerializer(order).data,
            "interval_violations": IntervalViolationSerializer(violations, many=True).data,
        }
        if options["verify"]:
            document["exact_forward_arcs"] = exact_median_order(T, budget=options.get("budget")).forward_arcs

        summary = f"order {' '.join(map(str, order.perm))} with {order.forward_arcs} forward arcs"
        if violations:
            summary += f"; {len(violations)} interval violations, first {violations[0]}"
        return Outcome(document, summary, NEGATIVE if violations else OK)
