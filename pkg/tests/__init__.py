"""Test suite for maslov-count."""
