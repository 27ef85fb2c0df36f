# app/services/__init__.py
"""
Services package: the ambient algebra, algebra construction, the catalog,
the classification scan and the torsion checks.
"""
