#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# @Author: adjorder developers
# @Date: 2021-03-02
# @Filename: configuration.py
# @License: BSD 3-clause (http://www.opensource.org/licenses/BSD-3-Clause)
#

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import
from __future__ import unicode_literals

import os

import yaml


__all__ = ['get_config', 'merge_config', 'read_yaml', 'write_yaml']


def merge_config(user, default):
    """Merges a user configuration with the default one."""

    if isinstance(user, dict) and isinstance(default, dict):
        for kk, vv in default.items():
            if kk not in user:
                user[kk] = vv
            else:
                user[kk] = merge_config(user[kk], vv)

    return user


def read_yaml(path):
    """Reads a YAML mapping. An empty file is an empty mapping."""

    with open(path, 'r', encoding='utf-8') as fp:
        data = yaml.safe_load(fp)

    return data or {}


def write_yaml(path, data):
    """Writes a flat mapping as YAML with sorted keys."""

    with open(path, 'w', encoding='utf-8', newline='\n') as fp:
        yaml.safe_dump(data, fp, default_flow_style=False, sort_keys=True,
                       allow_unicode=True)


def get_config(name, user_path=None, merge_mode='update'):
    """Returns a configuration dictionary.

    The configuration dictionary is created by merging the default
    configuration file that is part of the library (in ``etc/<name>.yml``)
    with a user configuration file passed in ``user_path``. Environment
    variables and per-user dotfiles are deliberately not looked at: the
    only way to change a run is an explicit file.

    Parameters
    ----------
    name : str
        The name of the package.
    user_path : str
        The path to the user configuration file. If `None`, only the
        default configuration is returned.
    merge_mode : str
        Defines how the default and user dictionaries will be merged. If
        ``update``, the user dictionary will be used to update the default
        configuration. If ``replace``, only the user configuration will be
        returned.

    Returns
    -------
    config : dict
        A dictionary containing the configuration.

    """

    assert merge_mode in ['update', 'replace'], 'invalid merge mode.'

    config_path = os.path.join(os.path.dirname(__file__), '../etc/{0}.yml'.format(name))
    config = read_yaml(config_path)

    if user_path is None:
        return config

    user_config = read_yaml(os.path.expanduser(user_path))

    if merge_mode == 'update':
        return merge_config(user_config, config)
    else:
        return user_config
