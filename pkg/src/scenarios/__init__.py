"""Scenario files, named example generators and random instances."""
