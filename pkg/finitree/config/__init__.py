config = {
    'global': {
        'log_dir': '.logs',
        'log_level': 'DEBUG',
        'progress': False,
    },
    'boolfun': {
        'node_budget': 1_000_000,
    },
    'analysis': {
        'max_iterations': 100,
        'domain': 'hp-fd-gd',
        'strict': False,
        'initial_h': 'all',  # 'all' = description of the empty substitution, 'none' = h starts empty
    },
    'sampling': {
        'seed': 0,
        'pool_depth': 1,
        'max_attempts': 50,
    },
    'report': {
        'format': 'text',
        'self_check_depth': 6,
        'self_check_samples': 50,
        'self_check_instances': 2,
        'domains': ['hp', 'hp-fd', 'hp-fd-gd'],
    },
}

def get_config():
    return config
