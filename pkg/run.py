"""
Simple launcher for the ELB stream matcher
Usage: python run.py <gen|match|bench|envelope> [flags]
"""
import sys
import warnings

# Warnings are already logged by the modules that raise them
warnings.filterwarnings('ignore', category=UserWarning)

if __name__ == '__main__':
    from cli import main

    sys.exit(main())
