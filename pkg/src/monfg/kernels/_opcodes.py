# Opcodes of the postfix utility programs; see monfg.utility.compile_program.
CONST = 0
VAR = 1
NEG = 2
ADD = 3
SUB = 4
MUL = 5
POW = 6
MAX = 7
MIN = 8
