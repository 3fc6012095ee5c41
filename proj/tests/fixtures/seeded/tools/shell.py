import subprocess


def run(cmd):
    subprocess.call(cmd, shell=True)


def run_safe(args):
    subprocess.call(["ls", "-l"])
    subprocess.run(args, shell=False)
