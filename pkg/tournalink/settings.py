from pathlib import Path
import os
from dotenv import load_dotenv

load_dotenv()


BASE_DIR = Path(__file__).resolve().parent.parent

# Nothing is signed or served; the key only satisfies Django's startup checks.
SECRET_KEY = os.getenv("SECRET_KEY", "tournalink-local")

DEBUG = os.getenv("DEBUG") == "True"

ALLOWED_HOSTS = os.getenv("ALLOWED_HOSTS", "").split(",")

# Application definition

INSTALLED_APPS = [
    "rest_framework",
    "core",
    "ordering",
    "flow",
    "anchor",
    "linker",
    "oracle",
    "toolkit",
]

# No persistence beyond files
DATABASES = {}


# Logging: diagnostics go to standard error, machine output stays on standard output
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {
            "format": "[{levelname}] {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "stderr": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "plain",
        },
    },
    "loggers": {
        name: {"handlers": ["stderr"], "level": LOG_LEVEL, "propagate": False}
        for name in ["core", "ordering", "flow", "anchor", "linker", "oracle", "toolkit"]
    },
}


REST_FRAMEWORK = {
    "UNAUTHENTICATED_USER": None,
    "DEFAULT_RENDERER_CLASSES": ["rest_framework.renderers.JSONRenderer"],
}


# Oracle budgets (exceeding one is a typed resource error, never a silent truncation)
ORACLE_EXHAUSTIVE_BUDGET = int(os.getenv("ORACLE_EXHAUSTIVE_BUDGET", "14"))
ORACLE_K_LINKED_BUDGET = int(os.getenv("ORACLE_K_LINKED_BUDGET", "10"))
ORACLE_MEDIAN_BUDGET = int(os.getenv("ORACLE_MEDIAN_BUDGET", "12"))
ORACLE_CONNECTIVITY_BUDGET = int(os.getenv("ORACLE_CONNECTIVITY_BUDGET", "12"))
ORACLE_DEFICIENCY_BUDGET = int(os.getenv("ORACLE_DEFICIENCY_BUDGET", "12"))

# Exact connectivity is expensive; the linker checks hypotheses by default only up to this size
HYPOTHESIS_CHECK_MAX_N = int(os.getenv("HYPOTHESIS_CHECK_MAX_N", "300"))

# Scale of the heavier end-to-end tests
ACCEPTANCE_ORDER_ROUNDS = int(os.getenv("ACCEPTANCE_ORDER_ROUNDS", "200"))
ACCEPTANCE_RANDOM_ROUNDS = int(os.getenv("ACCEPTANCE_RANDOM_ROUNDS", "50"))
ACCEPTANCE_LINK_INSTANCES = int(os.getenv("ACCEPTANCE_LINK_INSTANCES", "20"))
ACCEPTANCE_THREE_PAIR_INSTANCES = int(os.getenv("ACCEPTANCE_THREE_PAIR_INSTANCES", "5"))
