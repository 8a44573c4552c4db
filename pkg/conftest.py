import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "tournalink.settings")
django.setup()
