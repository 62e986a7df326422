#!/usr/bin/env python3
# -*- mode:python; tab-width:4; c-basic-offset:4; intent-tabs-mode:nil; -*-
# ex: filetype=python tabstop=4 softtabstop=4 shiftwidth=4 expandtab autoindent smartindent

# Physics-Attention Scaling Toolkit (PhAST)
#
# Physics-Attention Scaling Toolkit (PhAST) is free software:
# you can redistribute it and/or modify it under the terms of the GNU General
# Public License as published by the Free Software Foundation, Version 3.
#
# Physics-Attention Scaling Toolkit (PhAST) is distributed in the hope
# that it will be useful, but WITHOUT ANY WARRANTY; without even the implied
# warranty of MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.
#
# See the GNU General Public License for more details.
#
# SPDX-License-Identifier: GPL-3.0
# License-Filename: LICENSE/GPL-3.0.txt


#------------------------------------------------------------------------------
# MODULES
#------------------------------------------------------------------------------

# PhAST
from PhAST.Cli import \
     PhastCli_phast

# Standard
import errno
import sys


#------------------------------------------------------------------------------
# MAIN
#------------------------------------------------------------------------------

if __name__ == "__main__":
    try:
        sys.exit(PhastCli_phast().execute())
    except OSError as e:
        sys.exit(e.errno or errno.EIO)
    except KeyboardInterrupt as e:
        sys.exit(-2)
