"""
Text format for bundle presentations: parser and canonical printer.
"""
from src.dsl.parser import DslDocument, parse, parse_document
from src.dsl.printer import format_polynomial, print_map, print_presentation
