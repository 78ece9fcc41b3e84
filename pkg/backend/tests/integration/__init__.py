"""Init file for integration tests."""
