class FileNotFoundException(Exception):
    pass
