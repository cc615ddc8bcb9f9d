import sys

from thermocap.cli.commands import run

if __name__ == '__main__':
    sys.exit(run(sys.argv[1:]))
