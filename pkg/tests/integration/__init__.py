"""
End-to-end tests driving the nlslab command.
"""
