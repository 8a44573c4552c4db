"""In-process entry point: `cli_main(["link", "--in", "t.trn", ...])` returns the exit code."""

import os
import sys

import django
from django.core.management import load_command_class

COMMANDS = ("gen", "median", "anchor", "link", "conn", "oracle", "verify")


def cli_main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in COMMANDS:
        sys.stderr.write(f"usage: tournalink {{{','.join(COMMANDS)}}} [options]\n")
        return 2

    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "tournalink.settings")
    django.setup()
    command = load_command_class("toolkit", argv[0])
    try:
        command.run_from_argv(["tournalink", *argv])
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 2
    return 0


if __name__ == "__main__":
    sys.exit(cli_main())
