"""Continuous-time quantum walks on dynamic graphs."""
