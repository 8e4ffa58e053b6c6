# encoding: utf-8
#
# @Author:    adjorder developers
# @Date:      March 2, 2021
# @Filename:  __init__.py
# @License:   BSD 3-Clause
#
