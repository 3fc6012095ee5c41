def poll(device):
    try:
        device.read()
    except:
        pass


def poll_all(devices):
    for device in devices:
        try:
            device.read()
        except Exception:
            pass


def poll_strict(device):
    try:
        device.read()
    except ValueError:
        pass


def poll_logged(device, log):
    try:
        device.read()
    except:
        log.append(device)
