"""
Pytest wiring for the Django project in app/.

Configures settings and creates the test databases the same way
`python manage.py test` does, so the django.test TestCase classes run
under pytest.
"""
import os
import sys
from pathlib import Path

import pytest

APP_DIR = Path(__file__).resolve().parent / 'app'
if str(APP_DIR) not in sys.path:
    sys.path.insert(0, str(APP_DIR))

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'app.settings')

collect_ignore = ['examples']


def pytest_configure(config):
    import django
    django.setup()


@pytest.fixture(scope='session', autouse=True)
def _django_test_environment():
    from django.test.runner import DiscoverRunner

    runner = DiscoverRunner(verbosity=0, interactive=False)
    runner.setup_test_environment()
    old_config = runner.setup_databases()
    try:
        yield
    finally:
        runner.teardown_databases(old_config)
        runner.teardown_test_environment()
