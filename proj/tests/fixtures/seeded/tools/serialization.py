import pickle


def load_state(blob):
    # pickle.loads(blob) is unsafe on untrusted input
    return pickle.loads(blob)
