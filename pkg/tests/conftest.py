"""Pytest global conftest."""

# Enable pytester for testing pytest plugin
pytest_plugins = ["pytester"]
