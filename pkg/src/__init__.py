# Radical toolkit: traces, radicals and roots of zero-dimensional polynomial systems
